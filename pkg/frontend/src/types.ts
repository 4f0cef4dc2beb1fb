/** Response shapes of the paircompare HTTP API (mirrors the report schema). */

export interface SummaryStats {
  count: number;
  mean: number;
  median: number;
  std_dev: number;
  min: number;
  max: number;
  skewness: number;
  degenerate: boolean;
}

export interface HistogramData {
  bin_edges: number[];
  counts: number[];
  label: string;
}

export interface SkewClass {
  gamma: number;
  class: string;
  recommended_statistic: 'mean' | 'median';
  degenerate: boolean;
}

export interface NormalityResult {
  performed: boolean;
  w_statistic: number | null;
  p_value: number | null;
  alpha1: number;
  verdict: 'normal' | 'not_normal' | 'skipped';
  skip_reason: string | null;
}

export interface AnalysisReport {
  schema_version: string;
  stats_u: SummaryStats;
  stats_v: SummaryStats;
  stats_diff: SummaryStats;
  histograms: HistogramData[];
  skew: SkewClass;
  normality: NormalityResult;
  recommended_tests: string[];
}

export interface TestConfigEcho {
  test_id: string;
  direction: string;
  delta: number;
  alpha2: number;
  trials: number;
  seed: number;
}

export interface TestResult {
  config: TestConfigEcho;
  statistic_name: string;
  statistic_value: number;
  p_value: number;
  reject_h0: boolean;
  n: number;
  n_effective: number;
  confidence_interval: [number, number] | null;
  method: string;
  not_recommended?: boolean;
}

export interface EffectSizeEstimate {
  index: string;
  value: number;
  n: number;
  standardized: boolean;
}

export interface PowerPoint {
  sample_size: number;
  power: number;
  mc_stderr: number;
}

export interface PowerCurve {
  points: PowerPoint[];
  method: 'monte_carlo' | 'bootstrap';
  trials: number;
  seed: number;
  test_id: string;
  alpha: number;
  direction: string;
}

export interface ProspectiveRecord {
  spec: {
    expected_mean_diff: number;
    expected_std_dev: number;
    target_power: number;
    alpha: number;
    direction: string;
  };
  closed_form_n: number;
  refined_n: number;
}

export interface GridResult {
  system_names: string[];
  config: TestConfigEcho;
  p_values: (number | null)[][];
  adjusted_p: (number | null)[][];
  significant: boolean[][];
  n_comparisons: number;
}

export interface UploadResponse {
  session_id: string;
  n_rows: number;
}

export interface AggregateResponse {
  n: number;
  provenance: {
    source_name: string;
    eu_size: number;
    aggregator: string;
    shuffle_seed: number | null;
    n_rows: number;
    dropped_rows: number;
    skipped_comments: number;
    skipped_blanks: number;
  };
}

export interface SeedBundle {
  master_seed: number;
  test: number;
  power: number;
  sweep: number;
  grid: number;
}

export const TEST_IDS = [
  't_test',
  'wilcoxon_signed_rank',
  'sign_test',
  'bootstrap_t',
  'bootstrap_median',
  'permutation',
] as const;

export const EFFECT_SIZE_INDICES = [
  'cohens_d',
  'hedges_g',
  'wilcoxon_r',
  'hodges_lehmann',
] as const;
