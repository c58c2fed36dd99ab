/** Diverging blue-white-red map, exact endpoints at +-1. */

const NEGATIVE: [number, number, number] = [33, 102, 172];
const POSITIVE: [number, number, number] = [178, 24, 43];
const WHITE: [number, number, number] = [255, 255, 255];

function mix(from: [number, number, number], to: [number, number, number],
             t: number): [number, number, number] {
    return [
        Math.round(from[0] + (to[0] - from[0]) * t),
        Math.round(from[1] + (to[1] - from[1]) * t),
        Math.round(from[2] + (to[2] - from[2]) * t),
    ];
}

function hex(rgb: [number, number, number]): string {
    return '#' + rgb.map((v) => v.toString(16).padStart(2, '0')).join('');
}

/**
 * Color for a value on a scale symmetric about zero.
 * value = +limit maps to the full red endpoint, -limit to the full blue,
 * zero to white.
 */
export function divergingColor(value: number, limit: number): string {
    if (limit <= 0) return hex(WHITE);
    const t = Math.max(-1, Math.min(1, value / limit));
    if (t >= 0) return hex(mix(WHITE, POSITIVE, t));
    return hex(mix(WHITE, NEGATIVE, -t));
}

export const EXTREME_POSITIVE = hex(POSITIVE);
export const EXTREME_NEGATIVE = hex(NEGATIVE);
