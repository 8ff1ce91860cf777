import { describe, expect, it } from "vitest";

import { centroid, fitView, topicPlacement, topicPolygon } from "../src/geometry.js";

describe("topicPolygon", () => {
  it("puts the first vertex straight up and all on the circle", () => {
    const verts = topicPolygon(6, 100, 100, 50);
    expect(verts).toHaveLength(6);
    expect(verts[0].x).toBeCloseTo(100, 9);
    expect(verts[0].y).toBeCloseTo(50, 9);
    for (const v of verts) {
      const r = Math.hypot(v.x - 100, v.y - 100);
      expect(r).toBeCloseTo(50, 9);
    }
  });
});

describe("topicPlacement", () => {
  const verts = topicPolygon(6, 0, 0, 100);

  it("places a unit topic vector exactly at its vertex", () => {
    for (let t = 0; t < 6; t++) {
      const q = [0, 0, 0, 0, 0, 0];
      q[t] = 1;
      const p = topicPlacement(q, verts);
      expect(p.x).toBeCloseTo(verts[t].x, 9);
      expect(p.y).toBeCloseTo(verts[t].y, 9);
    }
  });

  it("places a uniform topic vector at the polygon centroid", () => {
    const q = new Array(6).fill(1 / 6);
    const p = topicPlacement(q, verts);
    const c = centroid(verts);
    expect(p.x).toBeCloseTo(c.x, 9);
    expect(p.y).toBeCloseTo(c.y, 9);
  });

  it("normalizes unnormalized weights", () => {
    const p1 = topicPlacement([2, 0, 0, 0, 0, 0], verts);
    expect(p1.x).toBeCloseTo(verts[0].x, 9);
    expect(p1.y).toBeCloseTo(verts[0].y, 9);
  });

  it("rejects a mismatched vector length", () => {
    expect(() => topicPlacement([1, 0], verts)).toThrow();
  });
});

describe("fitView", () => {
  it("maps the bounding box inside the padded viewport with north up", () => {
    const pts = [
      { lon: 120.0, lat: 28.0 },
      { lon: 120.2, lat: 28.2 },
    ];
    const toPx = fitView(pts, { width: 200, height: 200, pad: 10 });
    const southWest = toPx(120.0, 28.0);
    const northEast = toPx(120.2, 28.2);
    expect(southWest.x).toBeCloseTo(10, 6);
    expect(southWest.y).toBeCloseTo(190, 6);
    expect(northEast.y).toBeLessThan(southWest.y); // larger lat is higher on screen
    expect(northEast.x).toBeGreaterThan(southWest.x);
  });
});
