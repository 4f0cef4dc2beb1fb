/** Screen renderers. Pure functions from state to HTML strings; every number
 * shown comes from an API response via the formatting helpers. */
import { heatmapTable, histogramSvg, powerCurveSvg } from './charts.js';
import { escapeHtml, fmt, fmtInterval, fmtP } from './format.js';
import { defaultTestId, gates, type WorkflowState } from './state.js';
import { EFFECT_SIZE_INDICES, TEST_IDS, type SummaryStats } from './types.js';

function section(id: string, title: string, enabled: boolean, body: string): string {
  const cls = enabled ? 'step' : 'step step-disabled';
  return (
    `<section id="${id}" class="${cls}">` +
    `<h2>${escapeHtml(title)}</h2>` +
    `<div class="step-body">${body}</div>` +
    `</section>`
  );
}

function field(label: string, control: string, hint = ''): string {
  const hintHtml = hint ? `<span class="hint">${escapeHtml(hint)}</span>` : '';
  return `<label class="field"><span class="field-label">${escapeHtml(label)}</span>${control}${hintHtml}</label>`;
}

function numberInput(name: string, value: number | string, step = 'any'): string {
  return `<input type="number" step="${step}" data-field="${name}" value="${value}">`;
}

function textInput(name: string, value: string, placeholder = ''): string {
  return `<input type="text" data-field="${name}" value="${escapeHtml(value)}" placeholder="${escapeHtml(placeholder)}">`;
}

function select(name: string, options: [string, string][], selected: string): string {
  const opts = options
    .map(([value, label]) => {
      const sel = value === selected ? ' selected' : '';
      return `<option value="${value}"${sel}>${escapeHtml(label)}</option>`;
    })
    .join('');
  return `<select data-field="${name}">${opts}</select>`;
}

function button(action: string, label: string, disabled: boolean): string {
  return `<button data-action="${action}"${disabled ? ' disabled' : ''}>${escapeHtml(label)}</button>`;
}

// --- step 1: upload ---------------------------------------------------------

function renderUpload(state: WorkflowState): string {
  const f = state.form;
  const status = state.sessionId
    ? `<p class="ok">session <code>${escapeHtml(state.sessionId.slice(0, 8))}…</code> — ` +
      `${state.nRows} score rows uploaded</p>`
    : '<p class="muted">paste a two-column score file (one line per test instance) or choose a file</p>';
  return (
    `<div class="row">` +
    `<textarea data-field="scoresText" rows="6" placeholder="0.52,0.49\n0.61,0.60\n…">${escapeHtml(f.scoresText)}</textarea>` +
    `</div>` +
    `<div class="row controls">` +
    `<input type="file" id="score-file" accept=".csv,.tsv,.txt">` +
    field('name', textInput('scoresName', f.scoresName)) +
    field('format', select('format', [['csv', 'csv'], ['tsv', 'tsv']], f.format)) +
    field('header row', `<input type="checkbox" data-field="hasHeader"${f.hasHeader ? ' checked' : ''}>`) +
    button('upload', 'Upload', state.busy) +
    `</div>` +
    status
  );
}

// --- step 2: evaluation units ------------------------------------------------

function renderAggregate(state: WorkflowState): string {
  const f = state.form;
  const provenance = state.aggregated
    ? `<p class="ok">n = ${state.aggregated.n} evaluation units ` +
      `(${state.aggregated.provenance.dropped_rows} trailing rows dropped)</p>`
    : '';
  return (
    `<div class="row controls">` +
    field('EU size m', numberInput('euSize', f.euSize, '1')) +
    field('aggregator', select('aggregator', [['mean', 'mean'], ['median', 'median']], f.aggregator)) +
    field('shuffle seed', textInput('shuffleSeed', f.shuffleSeed, 'blank = no shuffle')) +
    field('master seed', numberInput('masterSeed', f.masterSeed, '1'),
      'derives the per-step seeds like the CLI --seed') +
    button('aggregate', 'Group into EUs', state.busy || !gates(state).aggregate) +
    `</div>` +
    provenance
  );
}

// --- step 3: data analysis ---------------------------------------------------

function statsRow(label: string, stats: SummaryStats): string {
  return (
    `<tr><th>${escapeHtml(label)}</th>` +
    `<td>${stats.count}</td><td>${fmt(stats.mean)}</td><td>${fmt(stats.median)}</td>` +
    `<td>${fmt(stats.std_dev)}</td><td>${fmt(stats.min)}</td><td>${fmt(stats.max)}</td>` +
    `<td>${fmt(stats.skewness)}</td></tr>`
  );
}

function renderAnalysis(state: WorkflowState): string {
  const f = state.form;
  const controls =
    `<div class="row controls">` +
    field('α₁ (normality level)', numberInput('alpha1', f.alpha1)) +
    button('analyze', 'Run data analysis', state.busy || !gates(state).analyze) +
    `</div>`;
  const analysis = state.analysis;
  if (!analysis) return controls;

  const stats =
    `<table class="stats"><thead><tr><th></th><th>n</th><th>mean</th><th>median</th>` +
    `<th>sd</th><th>min</th><th>max</th><th>skewness γ</th></tr></thead><tbody>` +
    statsRow('u', analysis.stats_u) +
    statsRow('v', analysis.stats_v) +
    statsRow('u − v', analysis.stats_diff) +
    `</tbody></table>`;
  const histograms = `<div class="row charts">${analysis.histograms.map(histogramSvg).join('')}</div>`;
  const skew = analysis.skew;
  const skewHtml =
    `<p>skewness class: <strong class="badge">${escapeHtml(skew.class)}</strong> ` +
    `(γ = ${fmt(skew.gamma, 4)}) → test statistic: <strong>${skew.recommended_statistic}</strong>` +
    (skew.degenerate ? ' <span class="warn">(degenerate sample)</span>' : '') +
    `</p>`;
  const normality = analysis.normality;
  const normalityHtml = normality.performed
    ? `<p>Shapiro-Wilk: W = ${fmt(normality.w_statistic)} , p = ${fmtP(normality.p_value)} ` +
      `at α₁ = ${normality.alpha1} → <strong class="badge verdict-${normality.verdict}">${normality.verdict}</strong></p>`
    : `<p>normality test skipped: ${escapeHtml(normality.skip_reason ?? '')}</p>`;
  const recommended = analysis.recommended_tests
    .map((id) => `<span class="badge recommended">${escapeHtml(id)}</span>`)
    .join(' ');
  return (
    controls + stats + histograms + skewHtml + normalityHtml +
    `<p>recommended tests: ${recommended}</p>`
  );
}

// --- step 4: significance test ------------------------------------------------

function renderTestRunner(state: WorkflowState): string {
  const f = state.form;
  const recommended = new Set(state.analysis?.recommended_tests ?? []);
  const chosen = defaultTestId(state);
  const options = TEST_IDS.map((id) => {
    const mark = state.analysis && !recommended.has(id) ? ' (not recommended)' : '';
    const cls = state.analysis && !recommended.has(id) ? ' class="not-recommended"' : '';
    const sel = id === chosen ? ' selected' : '';
    const title = mark ? ' title="not recommended for this sample"' : '';
    return `<option value="${id}"${sel}${cls}${title}>${id}${mark}</option>`;
  }).join('');
  const controls =
    `<div class="row controls">` +
    field('test', `<select data-field="testId" id="test-select">${options}</select>`) +
    field('direction', select('direction', [
      ['two_sided', 'two-sided'], ['left', 'left-sided'], ['right', 'right-sided'],
    ], f.direction)) +
    field('δ (hypothesized difference)', numberInput('delta', f.delta)) +
    field('α₂ (test level)', numberInput('alpha2', f.alpha2)) +
    field('B (resampling trials)', numberInput('trials', f.trials, '1')) +
    button('run-test', 'Run test', state.busy || !gates(state).test) +
    `</div>`;
  const result = state.testResult;
  if (!result) return controls;
  const banner = result.reject_h0
    ? '<div class="banner reject">H₀ rejected (p &lt; α₂)</div>'
    : '<div class="banner accept">H₀ not rejected (p ≥ α₂)</div>';
  const warning = result.not_recommended
    ? '<p class="warn">this test was not recommended for the sample; interpret with care</p>'
    : '';
  return (
    controls + banner + warning +
    `<dl class="result-card" id="test-result">` +
    `<dt>test</dt><dd>${escapeHtml(result.config.test_id)} (${escapeHtml(result.method)})</dd>` +
    `<dt>${escapeHtml(result.statistic_name)}</dt><dd>${fmt(result.statistic_value)}</dd>` +
    `<dt>p-value</dt><dd id="p-value">${fmtP(result.p_value)}</dd>` +
    `<dt>confidence interval</dt><dd>${fmtInterval(result.confidence_interval)}</dd>` +
    `<dt>n (effective)</dt><dd>${result.n} (${result.n_effective})</dd>` +
    `</dl>`
  );
}

// --- step 5: effect size --------------------------------------------------------

function renderEffect(state: WorkflowState): string {
  const picked = new Set(state.form.effectIndices);
  const boxes = EFFECT_SIZE_INDICES.map(
    (index) =>
      `<label class="check"><input type="checkbox" data-effect-index="${index}"` +
      `${picked.has(index) ? ' checked' : ''}> ${index}</label>`,
  ).join('');
  const controls =
    `<div class="row controls">${boxes}` +
    button('run-effect', 'Estimate effect size', state.busy || !gates(state).effect) +
    `</div>`;
  if (state.effectSizes.length === 0) return controls;
  const rows = state.effectSizes
    .map(
      (estimate) =>
        `<tr><td>${escapeHtml(estimate.index)}</td><td>${fmt(estimate.value)}</td>` +
        `<td>${estimate.standardized ? 'standardized' : 'raw scale'}</td><td>${estimate.n}</td></tr>`,
    )
    .join('');
  return (
    controls +
    `<table class="stats" id="effect-table"><thead><tr><th>index</th><th>estimate</th>` +
    `<th>kind</th><th>n</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

// --- step 6: power ---------------------------------------------------------------

function renderPower(state: WorkflowState): string {
  const f = state.form;
  const prospective =
    `<h3>prospective (plan the sample size)</h3>` +
    `<div class="row controls">` +
    field('expected mean diff', numberInput('prospectiveMeanDiff', f.prospectiveMeanDiff)) +
    field('expected sd', numberInput('prospectiveStdDev', f.prospectiveStdDev)) +
    field('target power', numberInput('targetPower', f.targetPower)) +
    button('run-prospective', 'Compute sample size', state.busy) +
    `</div>` +
    (state.prospective
      ? `<p class="ok" id="prospective-result">closed form n = ${state.prospective.closed_form_n}, ` +
        `refined n = <strong>${state.prospective.refined_n}</strong> ` +
        `(target power ${state.prospective.spec.target_power})</p>`
      : '');
  const retrospective =
    `<h3>retrospective (power vs sample size)</h3>` +
    `<div class="row controls">` +
    field('method', select('powerMethod', [
      ['bootstrap', 'bootstrap (resample observed diffs)'],
      ['mc', 'Monte Carlo (normal model)'],
    ], f.powerMethod)) +
    field('sizes', textInput('powerSizes', f.powerSizes, 'e.g. 50,100,200 (blank = auto)')) +
    field('trials', numberInput('powerTrials', f.powerTrials, '1')) +
    field('mc mean', textInput('mcMean', f.mcMean, 'mc only')) +
    field('mc sd', textInput('mcStd', f.mcStd, 'mc only')) +
    button('run-power', 'Estimate power', state.busy || !gates(state).power) +
    `</div>` +
    (state.power
      ? `<div class="row charts">${powerCurveSvg(state.power)}</div>` +
        `<p class="muted">${state.power.method}, ${state.power.trials} trials per size, ` +
        `test ${escapeHtml(state.power.test_id)}</p>`
      : '');
  return prospective + retrospective;
}

// --- step 7: pairwise grid --------------------------------------------------------

function renderGrid(state: WorkflowState): string {
  const f = state.form;
  const testOptions = TEST_IDS.map(
    (id) => `<option value="${id}"${id === f.gridTestId ? ' selected' : ''}>${id}</option>`,
  ).join('');
  const controls =
    `<div class="row">` +
    `<textarea data-field="gridCsv" rows="5" placeholder="sysA,sysB,sysC\n0.52,0.50,0.61\n…">${escapeHtml(f.gridCsv)}</textarea>` +
    `</div>` +
    `<div class="row controls">` +
    field('test', `<select data-field="gridTestId">${testOptions}</select>`) +
    field('α₂', numberInput('alpha2', f.alpha2)) +
    button('run-grid', 'Compare all pairs', state.busy) +
    `</div>` +
    `<p class="muted">CSV with one named column per system; scores must be EU-aligned. ` +
    `p-values are Bonferroni-adjusted over all pairs.</p>`;
  if (!state.grid) return controls;
  return (
    controls +
    `<p>${state.grid.system_names.length} systems → ${state.grid.n_comparisons} comparisons</p>` +
    heatmapTable(state.grid)
  );
}

// --- step 8: report -----------------------------------------------------------------

function renderReport(state: WorkflowState): string {
  const controls =
    `<div class="row controls">` +
    button('load-report', 'Assemble report', state.busy || !gates(state).report) +
    `</div>`;
  if (!state.reportText) return controls;
  const href = `data:application/json;charset=utf-8,${encodeURIComponent(state.reportText)}`;
  const mdNote =
    '<p class="muted">the JSON is canonical — byte-identical to the CLI report for the same ' +
    'inputs and seeds</p>';
  return (
    controls +
    `<p><a id="report-download" download="report.json" href="${href}">Download report.json</a></p>` +
    mdNote +
    `<pre class="report-json" id="report-preview">${escapeHtml(state.reportText)}</pre>`
  );
}

// --- top level -----------------------------------------------------------------------

export function renderApp(state: WorkflowState): string {
  const g = gates(state);
  const error = state.error
    ? `<div class="banner error" id="error-banner">${escapeHtml(state.error)}</div>`
    : '';
  const busy = state.busy ? '<div class="busy" id="busy">working…</div>' : '';
  return (
    `<header><h1>paircompare workbench</h1>` +
    `<p class="muted">upload paired scores → analyze → test → effect size → power → report</p>` +
    `</header>` +
    error +
    busy +
    section('upload', '1 · Upload scores', true, renderUpload(state)) +
    section('aggregate', '2 · Evaluation units', g.aggregate, renderAggregate(state)) +
    section('analysis', '3 · Data analysis', g.analyze, renderAnalysis(state)) +
    section('test', '4 · Significance test', g.test, renderTestRunner(state)) +
    section('effect', '5 · Effect size', g.effect, renderEffect(state)) +
    section('power', '6 · Power analysis', g.power, renderPower(state)) +
    section('grid', '7 · Pairwise grid', g.grid, renderGrid(state)) +
    section('report', '8 · Report', g.report, renderReport(state))
  );
}
