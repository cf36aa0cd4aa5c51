// The quality-views badge is a pure function of the three exact view
// fractions: lit when at least two of them reach the area threshold.

export const AREA_THRESHOLD = 0.75;

export function qualityViewsBadge(
  viewFactor: number,
  viewDepth: number,
  viewRange: number,
  threshold: number = AREA_THRESHOLD,
): boolean {
  const hits = [viewFactor, viewDepth, viewRange].filter((f) => f >= threshold).length;
  return hits >= 2;
}
