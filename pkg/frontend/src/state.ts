/** Workbench state and the step gating that mirrors the API's 409 rule. */
import type {
  AggregateResponse,
  AnalysisReport,
  EffectSizeEstimate,
  GridResult,
  PowerCurve,
  ProspectiveRecord,
  SeedBundle,
  TestResult,
} from './types.js';

/** Every user-settable parameter, with defaults matching the service. */
export interface FormState {
  scoresText: string;
  scoresName: string;
  format: 'csv' | 'tsv';
  hasHeader: boolean;
  euSize: number;
  aggregator: 'mean' | 'median';
  shuffleSeed: string; // blank = no shuffle
  masterSeed: number;
  alpha1: number;
  testId: string;
  direction: 'two_sided' | 'left' | 'right';
  delta: number;
  alpha2: number;
  trials: number;
  effectIndices: string[];
  prospectiveMeanDiff: number;
  prospectiveStdDev: number;
  targetPower: number;
  powerMethod: 'mc' | 'bootstrap';
  powerSizes: string;
  powerTrials: number;
  mcMean: string; // blank = use prospective mean/std fields
  mcStd: string;
  gridCsv: string;
  gridTestId: string;
}

export interface WorkflowState {
  form: FormState;
  sessionId: string | null;
  nRows: number | null;
  aggregated: AggregateResponse | null;
  analysis: AnalysisReport | null;
  testResult: TestResult | null;
  effectSizes: EffectSizeEstimate[];
  power: PowerCurve | null;
  prospective: ProspectiveRecord | null;
  grid: GridResult | null;
  reportText: string | null;
  seeds: SeedBundle | null;
  busy: boolean;
  error: string | null;
}

export function initialState(): WorkflowState {
  return {
    form: {
      scoresText: '',
      scoresName: 'scores.csv',
      format: 'csv',
      hasHeader: false,
      euSize: 1,
      aggregator: 'mean',
      shuffleSeed: '',
      masterSeed: 0,
      alpha1: 0.05,
      testId: '',
      direction: 'two_sided',
      delta: 0,
      alpha2: 0.05,
      trials: 10000,
      effectIndices: ['cohens_d', 'hedges_g'],
      prospectiveMeanDiff: 0.5,
      prospectiveStdDev: 1.0,
      targetPower: 0.8,
      powerMethod: 'bootstrap',
      powerSizes: '',
      powerTrials: 1000,
      mcMean: '',
      mcStd: '',
      gridCsv: '',
      gridTestId: 'wilcoxon_signed_rank',
    },
    sessionId: null,
    nRows: null,
    aggregated: null,
    analysis: null,
    testResult: null,
    effectSizes: [],
    power: null,
    prospective: null,
    grid: null,
    reportText: null,
    seeds: null,
    busy: false,
    error: null,
  };
}

/** Which steps are currently allowed; mirrors the service's ordering rule. */
export function gates(state: WorkflowState) {
  return {
    upload: true,
    aggregate: state.sessionId !== null,
    analyze: state.aggregated !== null,
    test: state.analysis !== null,
    effect: state.aggregated !== null,
    power: state.aggregated !== null,
    report: state.analysis !== null,
    grid: true, // stateless endpoint
  };
}

/** Downstream results are stale once the sample changes. */
export function clearDownstream(state: WorkflowState): void {
  state.analysis = null;
  state.testResult = null;
  state.effectSizes = [];
  state.power = null;
  state.reportText = null;
}

/** Pre-select the first recommended test once analysis exists. */
export function defaultTestId(state: WorkflowState): string {
  if (state.form.testId) return state.form.testId;
  if (state.analysis && state.analysis.recommended_tests.length > 0) {
    return state.analysis.recommended_tests[0]!;
  }
  return 't_test';
}

/** Effect-size defaults follow the recommended statistic. */
export function defaultEffectIndices(analysis: AnalysisReport | null): string[] {
  if (analysis && analysis.skew.recommended_statistic === 'median') {
    return ['wilcoxon_r', 'hodges_lehmann'];
  }
  return ['cohens_d', 'hedges_g'];
}
