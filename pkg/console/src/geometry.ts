/** Pure layout math for the topic polygon and spatial plot. */

export interface Point {
  x: number;
  y: number;
}

/** Vertices of a regular T-gon, first vertex straight up, clockwise. */
export function topicPolygon(
  topicCount: number,
  cx: number,
  cy: number,
  radius: number,
): Point[] {
  const vertices: Point[] = [];
  for (let t = 0; t < topicCount; t++) {
    const angle = -Math.PI / 2 + (2 * Math.PI * t) / topicCount;
    vertices.push({ x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) });
  }
  return vertices;
}

export function centroid(vertices: Point[]): Point {
  let x = 0;
  let y = 0;
  for (const v of vertices) {
    x += v.x;
    y += v.y;
  }
  return { x: x / vertices.length, y: y / vertices.length };
}

/**
 * Place a point at the convex combination of the polygon vertices
 * weighted by its topic vector: the closed-form fixed point of the
 * force layout. A unit vector lands exactly on its vertex; a uniform
 * vector lands at the centroid.
 */
export function topicPlacement(topics: number[], vertices: Point[]): Point {
  if (topics.length !== vertices.length) {
    throw new Error(`topic vector length ${topics.length} != ${vertices.length} vertices`);
  }
  const total = topics.reduce((acc, q) => acc + q, 0);
  if (total <= 0) return centroid(vertices);
  let x = 0;
  let y = 0;
  for (let t = 0; t < topics.length; t++) {
    const w = topics[t] / total;
    x += w * vertices[t].x;
    y += w * vertices[t].y;
  }
  return { x, y };
}

export interface Viewport {
  width: number;
  height: number;
  pad: number;
}

/** Map lon/lat pairs into pixel space preserving aspect ratio. */
export function fitView(
  points: Array<{ lon: number; lat: number }>,
  view: Viewport,
): (lon: number, lat: number) => Point {
  let lonMin = Infinity;
  let lonMax = -Infinity;
  let latMin = Infinity;
  let latMax = -Infinity;
  for (const p of points) {
    lonMin = Math.min(lonMin, p.lon);
    lonMax = Math.max(lonMax, p.lon);
    latMin = Math.min(latMin, p.lat);
    latMax = Math.max(latMax, p.lat);
  }
  if (!Number.isFinite(lonMin)) {
    lonMin = 0;
    lonMax = 1;
    latMin = 0;
    latMax = 1;
  }
  const spanLon = Math.max(lonMax - lonMin, 1e-9);
  const spanLat = Math.max(latMax - latMin, 1e-9);
  const scale = Math.min(
    (view.width - 2 * view.pad) / spanLon,
    (view.height - 2 * view.pad) / spanLat,
  );
  return (lon, lat) => ({
    x: view.pad + (lon - lonMin) * scale,
    // lat grows upward, pixel y grows downward
    y: view.height - view.pad - (lat - latMin) * scale,
  });
}
