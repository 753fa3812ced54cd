/**
 * Evidence gauge geometry.
 *
 * The gauge places the trial's current log evidence on a horizontal axis
 * between the de-escalation threshold (-log k2) and the escalation
 * threshold (log k1), with symmetric headroom so the needle stays on
 * screen for decisive evidence. Pure arithmetic on server-reported
 * numbers; no decision is derived here.
 */

export interface GaugeLayout {
  /** needle position in [0, 1] */
  needle: number;
  /** escalation threshold position in [0, 1] */
  escalateMark: number;
  /** de-escalation threshold position in [0, 1] */
  deescalateMark: number;
  /** neutral-evidence (ratio 1) position in [0, 1] */
  zeroMark: number;
  /** axis half-width in log-ratio units */
  halfWidth: number;
}

const HEADROOM = 1.6;

export function gaugeLayout(logGlr: number, k1: number, k2: number): GaugeLayout {
  if (!(k1 >= 1) || !(k2 >= 1)) {
    throw new Error(`cutoffs must be at least 1, got k1=${k1}, k2=${k2}`);
  }
  if (!Number.isFinite(logGlr)) {
    throw new Error(`log evidence must be finite, got ${logGlr}`);
  }
  const logK1 = Math.log(k1);
  const logK2 = Math.log(k2);
  // widen the axis so the needle stays strictly inside it; for evidence far
  // past a cutoff the needle parks at a fixed decisive position
  const halfWidth = Math.max(logK1, logK2, Math.abs(logGlr), 1e-6) * HEADROOM;
  const place = (value: number): number =>
    Math.min(1, Math.max(0, (value + halfWidth) / (2 * halfWidth)));
  return {
    needle: place(logGlr),
    escalateMark: place(logK1),
    deescalateMark: place(-logK2),
    zeroMark: place(0),
    halfWidth,
  };
}
