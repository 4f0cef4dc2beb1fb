/** Inline SVG charts built directly from the API's plot-data contracts.
 * Only coordinate scaling happens here — never statistics. */
import { escapeHtml, fmt } from './format.js';
import type { GridResult, HistogramData, PowerCurve } from './types.js';

const HIST_W = 260;
const HIST_H = 140;
const PAD = 24;

export function histogramSvg(hist: HistogramData): string {
  const edges = hist.bin_edges;
  const counts = hist.counts;
  const lo = edges[0]!;
  const hi = edges[edges.length - 1]!;
  const span = hi - lo || 1;
  const peak = Math.max(...counts, 1);
  const innerW = HIST_W - 2 * PAD;
  const innerH = HIST_H - 2 * PAD;
  const bars = counts
    .map((count, i) => {
      const x0 = PAD + ((edges[i]! - lo) / span) * innerW;
      const x1 = PAD + ((edges[i + 1]! - lo) / span) * innerW;
      const h = (count / peak) * innerH;
      const y = HIST_H - PAD - h;
      return `<rect x="${x0.toFixed(2)}" y="${y.toFixed(2)}" width="${Math.max(x1 - x0 - 0.5, 0.5).toFixed(2)}" height="${h.toFixed(2)}" class="hist-bar"><title>[${fmt(edges[i]!)}, ${fmt(edges[i + 1]!)}): ${count}</title></rect>`;
    })
    .join('');
  return (
    `<svg viewBox="0 0 ${HIST_W} ${HIST_H}" class="chart histogram" role="img" ` +
    `aria-label="histogram of ${escapeHtml(hist.label)}">` +
    `<text x="${HIST_W / 2}" y="12" text-anchor="middle" class="chart-title">${escapeHtml(hist.label)}</text>` +
    bars +
    `<line x1="${PAD}" y1="${HIST_H - PAD}" x2="${HIST_W - PAD}" y2="${HIST_H - PAD}" class="axis"/>` +
    `<text x="${PAD}" y="${HIST_H - 6}" class="tick">${fmt(lo, 3)}</text>` +
    `<text x="${HIST_W - PAD}" y="${HIST_H - 6}" text-anchor="end" class="tick">${fmt(hi, 3)}</text>` +
    `</svg>`
  );
}

const CURVE_W = 460;
const CURVE_H = 220;

/** Power vs sample size with a ±mc_stderr band, rendered verbatim. */
export function powerCurveSvg(curve: PowerCurve): string {
  const points = curve.points;
  if (points.length === 0) return '<svg class="chart power-curve"></svg>';
  const sizes = points.map((p) => p.sample_size);
  const minN = Math.min(...sizes);
  const maxN = Math.max(...sizes);
  const spanN = maxN - minN || 1;
  const innerW = CURVE_W - 2 * PAD;
  const innerH = CURVE_H - 2 * PAD;
  const x = (n: number) => PAD + ((n - minN) / spanN) * innerW;
  const y = (power: number) => CURVE_H - PAD - Math.min(Math.max(power, 0), 1) * innerH;

  const line = points.map((p) => `${x(p.sample_size).toFixed(2)},${y(p.power).toFixed(2)}`).join(' ');
  const upper = points.map((p) => `${x(p.sample_size).toFixed(2)},${y(p.power + p.mc_stderr).toFixed(2)}`);
  const lower = points
    .slice()
    .reverse()
    .map((p) => `${x(p.sample_size).toFixed(2)},${y(p.power - p.mc_stderr).toFixed(2)}`);
  const band = [...upper, ...lower].join(' ');
  const dots = points
    .map(
      (p) =>
        `<circle cx="${x(p.sample_size).toFixed(2)}" cy="${y(p.power).toFixed(2)}" r="3" class="curve-dot">` +
        `<title>n=${p.sample_size}: power ${fmt(p.power, 4)} ± ${fmt(p.mc_stderr, 3)}</title></circle>`,
    )
    .join('');
  return (
    `<svg viewBox="0 0 ${CURVE_W} ${CURVE_H}" class="chart power-curve" role="img" aria-label="power curve">` +
    `<polygon points="${band}" class="error-band"/>` +
    `<polyline points="${line}" class="curve-line" fill="none"/>` +
    dots +
    `<line x1="${PAD}" y1="${CURVE_H - PAD}" x2="${CURVE_W - PAD}" y2="${CURVE_H - PAD}" class="axis"/>` +
    `<line x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${CURVE_H - PAD}" class="axis"/>` +
    `<text x="${PAD - 4}" y="${y(1) + 4}" text-anchor="end" class="tick">1</text>` +
    `<text x="${PAD - 4}" y="${y(0) + 4}" text-anchor="end" class="tick">0</text>` +
    `<text x="${x(minN)}" y="${CURVE_H - 6}" class="tick">${minN}</text>` +
    `<text x="${x(maxN)}" y="${CURVE_H - 6}" text-anchor="end" class="tick">${maxN}</text>` +
    `<text x="${CURVE_W / 2}" y="${CURVE_H - 4}" text-anchor="middle" class="tick">sample size</text>` +
    `</svg>`
  );
}

/** Pairwise significance heatmap: dark cells significant, light cells not. */
export function heatmapTable(grid: GridResult): string {
  const names = grid.system_names;
  const header = names.map((name) => `<th class="rot"><span>${escapeHtml(name)}</span></th>`).join('');
  const rows = names
    .map((rowName, i) => {
      const cells = names
        .map((_, j) => {
          if (i === j) return '<td class="cell-diag"></td>';
          const adjusted = grid.adjusted_p[i]![j];
          const significant = grid.significant[i]![j]!;
          const cls = significant ? 'cell-sig' : 'cell-insig';
          return `<td class="${cls}" title="adjusted p = ${fmt(adjusted, 4)}">${fmt(adjusted, 2)}</td>`;
        })
        .join('');
      return `<tr><th>${escapeHtml(rowName)}</th>${cells}</tr>`;
    })
    .join('');
  return (
    `<table class="heatmap"><thead><tr><th></th>${header}</tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<p class="legend"><span class="swatch cell-sig"></span> significant (adjusted p &lt; α₂) ` +
    `<span class="swatch cell-insig"></span> not significant</p>`
  );
}
