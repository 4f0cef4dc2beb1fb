import { describe, expect, it } from 'vitest';

import { heatmapTable, histogramSvg, powerCurveSvg } from '../src/charts.js';
import type { GridResult, HistogramData, PowerCurve } from '../src/types.js';

const hist: HistogramData = {
  bin_edges: [0, 0.5, 1.0],
  counts: [3, 7],
  label: 'u-v',
};

describe('histogramSvg', () => {
  it('renders one bar per bin with verbatim counts in tooltips', () => {
    const svg = histogramSvg(hist);
    expect(svg.match(/<rect/g)).toHaveLength(2);
    expect(svg).toContain(': 3<');
    expect(svg).toContain(': 7<');
    expect(svg).toContain('u-v');
  });

  it('escapes labels', () => {
    const svg = histogramSvg({ ...hist, label: '<script>' });
    expect(svg).not.toContain('<script>');
  });
});

const curve: PowerCurve = {
  points: [
    { sample_size: 10, power: 0.2, mc_stderr: 0.01 },
    { sample_size: 50, power: 0.8, mc_stderr: 0.02 },
  ],
  method: 'monte_carlo',
  trials: 1000,
  seed: 0,
  test_id: 't_test',
  alpha: 0.05,
  direction: 'two_sided',
};

describe('powerCurveSvg', () => {
  it('draws the line, band, and one dot per point', () => {
    const svg = powerCurveSvg(curve);
    expect(svg).toContain('polyline');
    expect(svg).toContain('error-band');
    expect(svg.match(/<circle/g)).toHaveLength(2);
    expect(svg).toContain('power 0.8 ± 0.02');
  });

  it('monotone power maps to rising y-coordinates', () => {
    const svg = powerCurveSvg(curve);
    const match = svg.match(/polyline points="([^"]+)"/);
    const pairs = match![1]!.split(' ').map((pair) => pair.split(',').map(Number));
    // larger power -> smaller y (SVG origin is top-left)
    expect(pairs[1]![1]!).toBeLessThan(pairs[0]![1]!);
  });
});

const grid: GridResult = {
  system_names: ['a', 'b', 'c'],
  config: {
    test_id: 't_test', direction: 'two_sided', delta: 0, alpha2: 0.05, trials: 10000, seed: 0,
  },
  p_values: [
    [null, 0.001, 0.5],
    [0.001, null, 0.9],
    [0.5, 0.9, null],
  ],
  adjusted_p: [
    [null, 0.003, 1.0],
    [0.003, null, 1.0],
    [1.0, 1.0, null],
  ],
  significant: [
    [false, true, false],
    [true, false, false],
    [false, false, false],
  ],
  n_comparisons: 3,
};

describe('heatmapTable', () => {
  it('colors significant cells dark and the rest light', () => {
    const html = heatmapTable(grid);
    expect(html.match(/cell-sig/g)!.length).toBeGreaterThanOrEqual(2);
    expect(html).toContain('cell-insig');
    expect(html.match(/cell-diag/g)).toHaveLength(3);
  });

  it('shows adjusted p-values verbatim', () => {
    const html = heatmapTable(grid);
    expect(html).toContain('adjusted p = 0.003');
  });
});
