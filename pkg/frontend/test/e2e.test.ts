/** End-to-end: drive the workbench DOM against the real HTTP service.
 *
 * Spawns `python3 -m paircompare serve`, uploads a fixture through the UI,
 * walks every workflow step, and checks that the downloaded report is
 * byte-identical to the CLI `compare` output on the same inputs and seeds.
 * A second, skewed fixture checks that the t test is visibly marked as not
 * recommended.
 */
import { execFileSync, spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it, vi } from 'vitest';

import { ApiClient } from '../src/api.js';
import { App } from '../src/app.js';

const PORT = 18000 + (process.pid % 2000);
const BASE = `http://127.0.0.1:${PORT}`;
const MASTER_SEED = 42;

let service: ChildProcess;
let workdir: string;

// --- deterministic fixtures --------------------------------------------------

function lcg(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (Math.imul(s, 1664525) + 1013904223) >>> 0;
    return s / 4294967296;
  };
}

function approxNormal(rand: () => number): number {
  let sum = 0;
  for (let i = 0; i < 12; i++) sum += rand();
  return sum - 6; // Irwin-Hall: close to standard normal
}

function normalFixture(): string {
  const rand = lcg(2024);
  const lines: string[] = [];
  for (let i = 0; i < 360; i++) {
    const base = 0.5 + 0.05 * approxNormal(rand);
    const a = base + 0.02 + 0.05 * approxNormal(rand);
    const b = base + 0.05 * approxNormal(rand);
    lines.push(`${a.toFixed(9)},${b.toFixed(9)}`);
  }
  return lines.join('\n') + '\n';
}

function skewedFixture(): string {
  const rand = lcg(77);
  const lines: string[] = [];
  for (let i = 0; i < 150; i++) {
    const b = 0.4 + 0.1 * rand();
    const bump = Math.pow(-Math.log(1 - rand()), 2) * 0.1;
    lines.push(`${(b + bump).toFixed(9)},${b.toFixed(9)}`);
  }
  return lines.join('\n') + '\n';
}

// --- UI driving helpers --------------------------------------------------------

function makeApp(): App {
  const root = document.createElement('div');
  root.setAttribute('data-test-mount', '1');
  document.body.appendChild(root);
  return new App(root, new ApiClient(BASE, globalThis.fetch.bind(globalThis)));
}

function rootOf(app: App): HTMLElement {
  return (app as unknown as { root: HTMLElement }).root;
}

function setField(app: App, name: string, value: string | boolean): void {
  const element = rootOf(app).querySelector<HTMLInputElement>(`[data-field="${name}"]`);
  if (!element) throw new Error(`no field ${name}`);
  if (typeof value === 'boolean') element.checked = value;
  else element.value = value;
  element.dispatchEvent(new Event('change', { bubbles: true }));
}

async function clickAction(app: App, action: string): Promise<void> {
  const button = rootOf(app).querySelector<HTMLButtonElement>(`[data-action="${action}"]`);
  if (!button) throw new Error(`no action button ${action}`);
  expect(button.disabled).toBe(false);
  button.click();
  await vi.waitFor(
    () => {
      if (app.state.busy) throw new Error('still busy');
      if (app.state.error) throw new Error(`step ${action} failed: ${app.state.error}`);
    },
    { timeout: 60_000, interval: 25 },
  );
}

// --- lifecycle -------------------------------------------------------------------

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), 'workbench-e2e-'));
  service = spawn('python3', ['-m', 'paircompare', 'serve', '--listen', `127.0.0.1:${PORT}`], {
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  const stderr: string[] = [];
  service.stderr?.on('data', (chunk: Buffer) => stderr.push(chunk.toString()));
  await vi.waitFor(
    async () => {
      const response = await globalThis.fetch(`${BASE}/healthz`);
      if (!response.ok) throw new Error(`not ready: ${stderr.join('')}`);
    },
    { timeout: 60_000, interval: 250 },
  );
});

afterAll(() => {
  service?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

// --- tests -------------------------------------------------------------------------

describe('workbench end to end', () => {
  it('completes the workflow and downloads the CLI-identical report', async () => {
    const csv = normalFixture();
    const fixturePath = join(workdir, 'fixture.csv');
    writeFileSync(fixturePath, csv);

    // Reference output from the command line on the same inputs and seeds.
    const cliOut = join(workdir, 'cli-out');
    execFileSync('python3', [
      '-m', 'paircompare', 'compare', fixturePath,
      '--eu-size', '3', '--seed', String(MASTER_SEED),
      '--test', 't_test', '--power', 'mc',
      '--mc-mean', '0.02', '--mc-std', '0.07',
      '--power-sizes', '50,100', '--power-trials', '200',
      '--out', cliOut,
    ], { timeout: 120_000 });
    const cliReport = readFileSync(join(cliOut, 'report.json'), 'utf8');

    const app = makeApp();

    // 1 upload
    setField(app, 'scoresText', csv);
    setField(app, 'scoresName', 'fixture.csv');
    await clickAction(app, 'upload');
    expect(app.state.nRows).toBe(360);

    // 2 evaluation units (m = 3) + master seed
    setField(app, 'euSize', '3');
    setField(app, 'masterSeed', String(MASTER_SEED));
    await clickAction(app, 'aggregate');
    expect(app.state.aggregated!.n).toBe(120);

    // 3 analysis: symmetric normal diffs -> t test recommended and pre-selected
    await clickAction(app, 'analyze');
    expect(app.state.analysis!.recommended_tests[0]).toBe('t_test');
    const selected = rootOf(app).querySelector<HTMLOptionElement>('#test-select option[selected]');
    expect(selected?.value).toBe('t_test');

    // 4 test
    await clickAction(app, 'run-test');
    expect(app.state.testResult!.config.test_id).toBe('t_test');
    expect(app.state.testResult!.p_value).toBeGreaterThan(0);
    expect(rootOf(app).querySelector('.banner.reject, .banner.accept')).toBeTruthy();

    // 5 effect sizes (defaults follow the mean statistic, like the CLI)
    expect(app.state.form.effectIndices).toEqual(['cohens_d', 'hedges_g']);
    await clickAction(app, 'run-effect');
    expect(app.state.effectSizes.map((e) => e.index)).toEqual(['cohens_d', 'hedges_g']);

    // 6 power: Monte-Carlo, same parameters as the CLI run
    setField(app, 'powerMethod', 'mc');
    setField(app, 'mcMean', '0.02');
    setField(app, 'mcStd', '0.07');
    setField(app, 'powerSizes', '50,100');
    setField(app, 'powerTrials', '200');
    await clickAction(app, 'run-power');
    expect(app.state.power!.points).toHaveLength(2);
    expect(rootOf(app).querySelector('svg.power-curve')).toBeTruthy();

    // 7 report: canonical text, byte-identical to the CLI output
    await clickAction(app, 'load-report');
    expect(app.state.reportText).toBe(cliReport);

    const link = rootOf(app).querySelector<HTMLAnchorElement>('#report-download');
    expect(link).toBeTruthy();
    const href = link!.getAttribute('href')!;
    const downloaded = decodeURIComponent(href.replace('data:application/json;charset=utf-8,', ''));
    expect(downloaded).toBe(cliReport);
  });

  it('visibly marks the t test as not recommended for a skewed fixture', async () => {
    const app = makeApp();
    setField(app, 'scoresText', skewedFixture());
    setField(app, 'scoresName', 'skewed.csv');
    await clickAction(app, 'upload');
    await clickAction(app, 'aggregate');
    await clickAction(app, 'analyze');

    expect(app.state.analysis!.skew.recommended_statistic).toBe('median');
    expect(app.state.analysis!.recommended_tests).not.toContain('t_test');

    const option = rootOf(app).querySelector<HTMLOptionElement>('#test-select option[value="t_test"]');
    expect(option).toBeTruthy();
    expect(option!.classList.contains('not-recommended')).toBe(true);
    expect(option!.textContent).toContain('(not recommended)');
    expect(option!.title).toContain('not recommended');

    // recommended tests are highlighted in the analysis view
    const badges = [...rootOf(app).querySelectorAll('.badge.recommended')].map(
      (el) => el.textContent,
    );
    expect(badges).toContain('wilcoxon_signed_rank');
  });

  it('mirrors the service step-order rule in the UI', async () => {
    const app = makeApp();
    const testButton = rootOf(app).querySelector<HTMLButtonElement>('[data-action="run-test"]');
    expect(testButton!.disabled).toBe(true);
    const analyzeSection = rootOf(app).querySelector('#analysis');
    expect(analyzeSection!.classList.contains('step-disabled')).toBe(true);
  });

  it('runs the pairwise grid screen against the stateless endpoint', async () => {
    const app = makeApp();
    const rand = lcg(5);
    const rows: string[] = ['one,two,three'];
    for (let i = 0; i < 60; i++) {
      const shared = approxNormal(rand);
      rows.push(
        `${(shared + 0.3 * approxNormal(rand)).toFixed(6)},` +
          `${(shared + 0.3 * approxNormal(rand)).toFixed(6)},` +
          `${(shared + 0.3 * approxNormal(rand) + 2).toFixed(6)}`,
      );
    }
    setField(app, 'gridCsv', rows.join('\n'));
    setField(app, 'gridTestId', 't_test');
    await clickAction(app, 'run-grid');
    expect(app.state.grid!.n_comparisons).toBe(3);
    const table = rootOf(app).querySelector('table.heatmap');
    expect(table).toBeTruthy();
    expect(table!.querySelectorAll('td.cell-sig').length).toBeGreaterThanOrEqual(2);
  });
});
