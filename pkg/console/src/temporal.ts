/** Segment computation for the temporal band view. */

import type { TrajectoryJson } from "./types.js";

export interface Segment {
  start: number;
  end: number;
  topic: number; // dominant topic index of the segment's region
  stationId: string;
}

function dominantTopic(topics: number[]): number {
  let best = 0;
  for (let t = 1; t < topics.length; t++) {
    if (topics[t] > topics[best]) best = t;
  }
  return best;
}

/**
 * Collapse consecutive same-station points into colored segments.
 * Zero-length visits keep a minimal extent so they stay visible.
 */
export function computeSegments(trajectory: TrajectoryJson, minExtent = 60): Segment[] {
  const segments: Segment[] = [];
  for (const point of trajectory.points) {
    const last = segments[segments.length - 1];
    if (last && last.stationId === point.station_id) {
      last.end = point.timestamp;
    } else {
      segments.push({
        start: point.timestamp,
        end: point.timestamp,
        topic: dominantTopic(point.topics),
        stationId: point.station_id,
      });
    }
  }
  for (const seg of segments) {
    if (seg.end - seg.start < minExtent) seg.end = seg.start + minExtent;
  }
  return segments;
}

/** Trajectory ids with at least one point inside the brushed range. */
export function brushFilter(
  trajectories: TrajectoryJson[],
  brush: [number, number] | null,
): Set<string> {
  if (brush === null) {
    return new Set(trajectories.map((t) => t.id));
  }
  const [lo, hi] = brush;
  const kept = new Set<string>();
  for (const t of trajectories) {
    if (t.points.some((p) => p.timestamp >= lo && p.timestamp <= hi)) {
      kept.add(t.id);
    }
  }
  return kept;
}

export function timeExtent(trajectories: TrajectoryJson[]): [number, number] | null {
  let lo = Infinity;
  let hi = -Infinity;
  for (const t of trajectories) {
    for (const p of t.points) {
      lo = Math.min(lo, p.timestamp);
      hi = Math.max(hi, p.timestamp);
    }
  }
  return Number.isFinite(lo) ? [lo, hi] : null;
}
