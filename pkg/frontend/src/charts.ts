// Pure chart geometry: data in, scaled points and SVG path strings out.
// Rendering stays string-based so the math is testable without a DOM.

import type { PendingBatch, SessionSnapshot } from './api.js';

export interface Point {
  x: number;
  y: number;
}

export interface TrajectoryChart {
  points: Point[];
  path: string;
  generations: number;
}

const margin = 4;

function scale(value: number, lo: number, hi: number, size: number): number {
  const span = hi - lo || 1;
  return margin + ((value - lo) / span) * (size - 2 * margin);
}

export function trajectoryChart(
  snapshot: SessionSnapshot,
  width = 600,
  height = 200,
): TrajectoryChart {
  const known = snapshot.trajectory
    .map((value, i) => ({ gen: i + 1, value }))
    .filter((p): p is { gen: number; value: number } => p.value !== null);
  const ymax = known.length ? Math.max(...known.map((p) => p.value)) : 1;
  const points = known.map((p) => ({
    x: scale(p.gen, 1, snapshot.generations, width),
    y: height - scale(p.value, 0, ymax, height),
  }));
  const path = points
    .map((p, i) => `${i === 0 ? 'M' : 'L'}${p.x.toFixed(2)},${p.y.toFixed(2)}`)
    .join(' ');
  return { points, path, generations: snapshot.generations };
}

export interface ScatterView {
  candidates: Point[];
  population: Point[];
}

// m <= 3: scatter of the first two objectives, candidates over the
// population backdrop
export function scatterView(batch: PendingBatch, width = 400, height = 400): ScatterView {
  const all = [...batch.candidates.map((c) => c.objectives), ...(batch.population ?? [])];
  const xs = all.map((f) => f[0]);
  const ys = all.map((f) => f[1]);
  const [xlo, xhi] = [Math.min(...xs), Math.max(...xs)];
  const [ylo, yhi] = [Math.min(...ys), Math.max(...ys)];
  const toPoint = (f: number[]): Point => ({
    x: scale(f[0], xlo, xhi, width),
    y: height - scale(f[1], ylo, yhi, height),
  });
  return {
    candidates: batch.candidates.map((c) => toPoint(c.objectives)),
    population: (batch.population ?? []).map(toPoint),
  };
}

export interface ParallelView {
  axes: number;
  polylines: string[];
}

// m > 3: one polyline per candidate across one vertical axis per objective
export function parallelView(batch: PendingBatch, width = 600, height = 300): ParallelView {
  const m = batch.candidates[0]?.objectives.length ?? 0;
  const rows = batch.candidates.map((c) => c.objectives);
  const lo = Array.from({ length: m }, (_, j) => Math.min(...rows.map((r) => r[j])));
  const hi = Array.from({ length: m }, (_, j) => Math.max(...rows.map((r) => r[j])));
  const axisX = (j: number) => scale(j, 0, Math.max(m - 1, 1), width);
  const polylines = rows.map((r) =>
    r
      .map((v, j) => {
        const y = height - scale(v, lo[j], hi[j], height);
        return `${j === 0 ? 'M' : 'L'}${axisX(j).toFixed(2)},${y.toFixed(2)}`;
      })
      .join(' '),
  );
  return { axes: m, polylines };
}

export function usesParallelCoordinates(batch: PendingBatch): boolean {
  return (batch.candidates[0]?.objectives.length ?? 0) > 3;
}
