/** Display formatting only — values pass through from the API untouched. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Compact numeric display: up to `digits` significant digits. */
export function fmt(value: number | null | undefined, digits = 5): string {
  if (value === null || value === undefined) return 'n/a';
  if (!Number.isFinite(value)) return String(value);
  if (value === 0) return '0';
  const magnitude = Math.abs(value);
  if (magnitude >= 1e6 || magnitude < 1e-4) return value.toExponential(Math.max(digits - 1, 0));
  const text = value.toPrecision(digits);
  return text.includes('.') ? text.replace(/\.?0+$/, '') : text;
}

export function fmtP(p: number | null | undefined): string {
  if (p === null || p === undefined) return 'n/a';
  if (p < 1e-4) return p.toExponential(2);
  return fmt(p, 4);
}

export function fmtInterval(ci: [number, number] | null): string {
  if (ci === null) return 'n/a';
  return `[${fmt(ci[0])}, ${fmt(ci[1])}]`;
}

/** Parse "50,100,200" into a size list; null when blank. */
export function parseSizeList(text: string): number[] | null {
  const trimmed = text.trim();
  if (!trimmed) return null;
  const sizes = trimmed.split(',').map((part) => Number.parseInt(part.trim(), 10));
  if (sizes.some((n) => !Number.isFinite(n) || n < 2)) {
    throw new Error(`bad size list: ${text}`);
  }
  return sizes;
}

/** Parse a multi-column CSV (header row of system names) for the grid view. */
export function parseMultiSystemCsv(text: string): Record<string, number[]> {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line && !line.startsWith('#'));
  if (lines.length < 2) throw new Error('need a header row and at least one data row');
  const header = lines[0]!;
  const names = header.split(',').map((name) => name.trim());
  const columns: number[][] = names.map(() => []);
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i]!.split(',');
    if (fields.length !== names.length) {
      throw new Error(`line ${i + 1}: expected ${names.length} fields, found ${fields.length}`);
    }
    fields.forEach((field, col) => {
      const value = Number.parseFloat(field);
      if (!Number.isFinite(value)) throw new Error(`line ${i + 1}: bad number ${field.trim()}`);
      columns[col]!.push(value);
    });
  }
  const systems: Record<string, number[]> = {};
  names.forEach((name, col) => {
    systems[name] = columns[col]!;
  });
  return systems;
}
