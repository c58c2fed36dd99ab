import { divergingColor } from './colormap.js';

export interface PanelSpec {
    title: string;
    matrices: {
        true: number[][];
        full: number[][];
        lt: number[][];
        hs: number[][];
    };
}

export class ShapeMismatch extends Error {
    constructor(detail: string) {
        super(detail);
        this.name = 'ShapeMismatch';
    }
}

const SUBCAPTIONS: [keyof PanelSpec['matrices'], string][] = [
    ['true', '(a) True'],
    ['full', '(b) Full-NOWI'],
    ['lt', '(c) LT-NOWI'],
    ['hs', '(d) LT-HSGHS'],
];

const CELL = 24;
const PAD = 18;
const CAPTION_H = 26;
const TITLE_H = 34;

function esc(text: string): string {
    return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

/** Shared symmetric color limit: the largest magnitude across all panels. */
export function sharedLimit(spec: PanelSpec): number {
    let limit = 0;
    for (const [key] of SUBCAPTIONS) {
        for (const row of spec.matrices[key]) {
            for (const v of row) {
                limit = Math.max(limit, Math.abs(v));
            }
        }
    }
    return limit;
}

function checkShapes(spec: PanelSpec): [number, number] {
    const first = spec.matrices.true;
    const shape: [number, number] = [first.length, first[0].length];
    for (const [key] of SUBCAPTIONS) {
        const mat = spec.matrices[key];
        if (mat.length !== shape[0] || mat.some((r) => r.length !== shape[1])) {
            throw new ShapeMismatch(
                `panel '${key}' is ${mat.length}x${mat[0]?.length ?? 0}, ` +
                `expected ${shape[0]}x${shape[1]}`,
            );
        }
    }
    return shape;
}

/**
 * Render the 2x2 comparison grid as a standalone SVG document.
 * One diverging scale centered at zero is shared by all four heatmaps.
 */
export function renderPanel(spec: PanelSpec): string {
    const [rows, cols] = checkShapes(spec);
    const limit = sharedLimit(spec);
    const gridW = cols * CELL;
    const gridH = rows * CELL;
    const panelW = gridW + PAD;
    const panelH = gridH + CAPTION_H;
    const width = 2 * panelW + PAD;
    const height = TITLE_H + 2 * panelH + PAD;

    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
        `height="${height}" viewBox="0 0 ${width} ${height}">`,
    );
    parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
    parts.push(
        `<text x="${width / 2}" y="22" text-anchor="middle" ` +
        `font-family="sans-serif" font-size="16">${esc(spec.title)}` +
        ` (scale ±${limit.toPrecision(3)})</text>`,
    );

    SUBCAPTIONS.forEach(([key, caption], index) => {
        const px = PAD / 2 + (index % 2) * panelW;
        const py = TITLE_H + Math.floor(index / 2) * panelH;
        const mat = spec.matrices[key];
        for (let i = 0; i < rows; i++) {
            for (let j = 0; j < cols; j++) {
                const fill = divergingColor(mat[i][j], limit);
                parts.push(
                    `<rect data-panel="${key}" data-row="${i + 1}" ` +
                    `data-col="${j + 1}" x="${px + j * CELL}" ` +
                    `y="${py + i * CELL}" width="${CELL}" height="${CELL}" ` +
                    `fill="${fill}" stroke="#cccccc" stroke-width="0.5"/>`,
                );
            }
        }
        parts.push(
            `<text x="${px + gridW / 2}" y="${py + gridH + 18}" ` +
            `text-anchor="middle" font-family="sans-serif" font-size="13">` +
            `${esc(caption)}</text>`,
        );
    });
    parts.push('</svg>');
    return parts.join('\n');
}
