/** Workbench controller: owns the state, talks to the API, re-renders.
 * Every step waits for its API response before the state changes — there is
 * no optimistic UI, so the screens can never get ahead of the service. */
import { ApiClient, ApiError } from './api.js';
import { parseMultiSystemCsv, parseSizeList } from './format.js';
import {
  clearDownstream,
  defaultEffectIndices,
  defaultTestId,
  initialState,
  type WorkflowState,
} from './state.js';
import { renderApp } from './views.js';

export class App {
  state: WorkflowState = initialState();

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {
    root.addEventListener('click', (event) => this.onClick(event));
    root.addEventListener('change', (event) => this.onChange(event));
    this.render();
  }

  render(): void {
    this.root.innerHTML = renderApp(this.state);
    const fileInput = this.root.querySelector<HTMLInputElement>('#score-file');
    fileInput?.addEventListener('change', () => this.onFilePicked(fileInput));
  }

  private onFilePicked(input: HTMLInputElement): void {
    const file = input.files?.[0];
    if (!file) return;
    const reader = new FileReader();
    reader.onload = () => {
      this.state.form.scoresText = String(reader.result ?? '');
      this.state.form.scoresName = file.name;
      this.render();
    };
    reader.readAsText(file);
  }

  private onChange(event: Event): void {
    const target = event.target as HTMLElement;
    const fieldName = target.getAttribute('data-field');
    if (fieldName) {
      const input = target as HTMLInputElement;
      const form = this.state.form as unknown as Record<string, unknown>;
      if (input.type === 'checkbox') {
        form[fieldName] = input.checked;
      } else if (input.type === 'number') {
        form[fieldName] = Number(input.value);
      } else {
        form[fieldName] = input.value;
      }
      return; // no re-render: keep focus while typing
    }
    const effectIndex = target.getAttribute('data-effect-index');
    if (effectIndex) {
      const checked = (target as HTMLInputElement).checked;
      const picked = new Set(this.state.form.effectIndices);
      if (checked) picked.add(effectIndex);
      else picked.delete(effectIndex);
      this.state.form.effectIndices = [...picked];
    }
  }

  private onClick(event: Event): void {
    const target = (event.target as HTMLElement).closest('[data-action]');
    if (!target) return;
    const action = target.getAttribute('data-action')!;
    void this.dispatch(action);
  }

  async dispatch(action: string): Promise<void> {
    const actions: Record<string, () => Promise<void>> = {
      upload: () => this.upload(),
      aggregate: () => this.aggregate(),
      analyze: () => this.analyze(),
      'run-test': () => this.runTest(),
      'run-effect': () => this.runEffect(),
      'run-prospective': () => this.runProspective(),
      'run-power': () => this.runPower(),
      'run-grid': () => this.runGrid(),
      'load-report': () => this.loadReport(),
    };
    const handler = actions[action];
    if (!handler) return;
    this.state.busy = true;
    this.state.error = null;
    this.render();
    try {
      await handler();
    } catch (error) {
      this.state.error =
        error instanceof ApiError ? `${error.kind}: ${error.detail}` : String(error);
    } finally {
      this.state.busy = false;
      this.render();
    }
  }

  private async upload(): Promise<void> {
    const f = this.state.form;
    const response = await this.api.upload(f.scoresText, f.format, f.hasHeader, f.scoresName);
    this.state.sessionId = response.session_id;
    this.state.nRows = response.n_rows;
    this.state.aggregated = null;
    clearDownstream(this.state);
  }

  private requireSession(): string {
    if (!this.state.sessionId) throw new Error('upload scores first');
    return this.state.sessionId;
  }

  private async ensureSeeds(): Promise<void> {
    const master = this.state.form.masterSeed;
    if (this.state.seeds && this.state.seeds.master_seed === master) return;
    this.state.seeds = await this.api.seeds(master);
  }

  private async aggregate(): Promise<void> {
    const sessionId = this.requireSession();
    const f = this.state.form;
    const shuffleSeed = f.shuffleSeed.trim() === '' ? null : Number(f.shuffleSeed);
    this.state.aggregated = await this.api.aggregate(sessionId, {
      eu_size: f.euSize,
      aggregator: f.aggregator,
      shuffle_seed: shuffleSeed,
    });
    clearDownstream(this.state);
  }

  private async analyze(): Promise<void> {
    const sessionId = this.requireSession();
    this.state.analysis = await this.api.analyze(sessionId, this.state.form.alpha1);
    this.state.form.effectIndices = defaultEffectIndices(this.state.analysis);
    this.state.form.testId = ''; // re-derive the pre-selected test
  }

  private async runTest(): Promise<void> {
    const sessionId = this.requireSession();
    await this.ensureSeeds();
    const f = this.state.form;
    this.state.testResult = await this.api.runTest(sessionId, {
      test_id: defaultTestId(this.state),
      direction: f.direction,
      delta: f.delta,
      alpha2: f.alpha2,
      trials: f.trials,
      seed: this.state.seeds!.test,
    });
  }

  private async runEffect(): Promise<void> {
    const sessionId = this.requireSession();
    const response = await this.api.effect(sessionId, this.state.form.effectIndices);
    this.state.effectSizes = response.effect_sizes;
  }

  private async runProspective(): Promise<void> {
    const sessionId = this.requireSession();
    const f = this.state.form;
    this.state.prospective = await this.api.prospectivePower(sessionId, {
      mean_diff: f.prospectiveMeanDiff,
      std_dev: f.prospectiveStdDev,
      target_power: f.targetPower,
      alpha: f.alpha2,
      direction: 'two_sided',
    });
  }

  private async runPower(): Promise<void> {
    const sessionId = this.requireSession();
    await this.ensureSeeds();
    const f = this.state.form;
    const body = {
      method: f.powerMethod,
      test_id: defaultTestId(this.state),
      alpha: f.alpha2,
      direction: f.direction,
      sample_sizes: parseSizeList(f.powerSizes),
      trials: f.powerTrials,
      seed: this.state.seeds!.power,
    };
    if (f.powerMethod === 'mc') {
      this.state.power = await this.api.retrospectivePower(sessionId, {
        ...body,
        mean_diff: Number(f.mcMean),
        std_dev: Number(f.mcStd),
      });
    } else {
      this.state.power = await this.api.retrospectivePower(sessionId, body);
    }
  }

  private async runGrid(): Promise<void> {
    await this.ensureSeeds();
    const f = this.state.form;
    this.state.grid = await this.api.grid({
      systems: parseMultiSystemCsv(f.gridCsv),
      test_id: f.gridTestId,
      direction: 'two_sided',
      delta: 0,
      alpha2: f.alpha2,
      trials: f.trials,
      seed: this.state.seeds!.grid,
    });
  }

  private async loadReport(): Promise<void> {
    const sessionId = this.requireSession();
    this.state.reportText = await this.api.reportText(sessionId, this.state.form.masterSeed);
  }
}

export function mount(root: HTMLElement, api = new ApiClient()): App {
  return new App(root, api);
}

// Browser entry point; tests import and mount explicitly.
const rootElement = typeof document !== 'undefined' ? document.getElementById('app') : null;
if (rootElement && !rootElement.hasAttribute('data-test-mount')) {
  mount(rootElement);
}
