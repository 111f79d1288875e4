// SVG/HTML fragment builders. Pure string producers; main.ts owns the DOM.

import type { PendingBatch, SessionSnapshot } from './api.js';
import {
  parallelView,
  scatterView,
  trajectoryChart,
  usesParallelCoordinates,
} from './charts.js';
import type { ConsultationForm } from './state.js';

const esc = (s: string) => s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');

export function renderTrajectorySvg(snapshot: SessionSnapshot, width = 600, height = 200): string {
  const chart = trajectoryChart(snapshot, width, height);
  const line = chart.path
    ? `<path d="${chart.path}" fill="none" stroke="#2563eb" stroke-width="1.5"/>`
    : '<text x="20" y="30" class="muted">no metric yet</text>';
  return `<svg viewBox="0 0 ${width} ${height}" role="img" aria-label="progress trajectory">${line}</svg>`;
}

export function renderCandidateChart(batch: PendingBatch, width = 600, height = 320): string {
  if (usesParallelCoordinates(batch)) {
    const view = parallelView(batch, width, height);
    const axes = Array.from({ length: view.axes }, (_, j) => {
      const x = (4 + (j / Math.max(view.axes - 1, 1)) * (width - 8)).toFixed(2);
      return `<line x1="${x}" y1="0" x2="${x}" y2="${height}" stroke="#d4d4d8"/>`;
    }).join('');
    const lines = view.polylines
      .map((d, i) => `<path d="${d}" fill="none" stroke="#dc2626" data-candidate="${i}"/>`)
      .join('');
    return `<svg viewBox="0 0 ${width} ${height}" class="parallel">${axes}${lines}</svg>`;
  }
  const view = scatterView(batch, width, height);
  const backdrop = view.population
    .map((p) => `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="2" fill="#a1a1aa"/>`)
    .join('');
  const marks = view.candidates
    .map(
      (p, i) =>
        `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="5" fill="#dc2626" data-candidate="${i}"/>`,
    )
    .join('');
  return `<svg viewBox="0 0 ${width} ${height}" class="scatter">${backdrop}${marks}</svg>`;
}

export function renderCandidateRows(batch: PendingBatch, form: ConsultationForm): string {
  return batch.candidates
    .map((c, i) => {
      const entry = form.entries[i];
      const objectives = c.objectives.map((v) => v.toFixed(4)).join(', ');
      const value = entry.value === null ? '' : String(entry.value);
      return `
<tr>
  <td>#${i + 1}</td>
  <td class="objectives">(${esc(objectives)})</td>
  <td><input type="number" step="any" data-score-for="${esc(c.id)}" value="${value}"
       aria-label="score for candidate ${i + 1}"></td>
</tr>`;
    })
    .join('');
}

export function renderPhaseBadge(snapshot: SessionSnapshot): string {
  return `<span class="badge phase-${snapshot.phase}">${snapshot.phase}</span>
<span class="muted">generation ${snapshot.generation}/${snapshot.generations},
consultations ${snapshot.consultations}</span>`;
}

export function renderFinalTable(snapshot: SessionSnapshot, limit = 20): string {
  const rows = (snapshot.final_objectives ?? [])
    .slice(0, limit)
    .map((f) => `<tr><td>(${f.map((v) => v.toFixed(4)).join(', ')})</td></tr>`)
    .join('');
  return rows ? `<table class="final"><tbody>${rows}</tbody></table>` : '';
}
