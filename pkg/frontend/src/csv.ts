import * as fs from 'node:fs';

export class MissingFile extends Error {
    constructor(path: string) {
        super(`no such file: ${path}`);
        this.name = 'MissingFile';
    }
}

export class FormatError extends Error {
    constructor(path: string, line: number, detail: string) {
        super(`${path}:${line}: ${detail}`);
        this.name = 'FormatError';
    }
}

/** Parse a headerless numeric CSV into a rectangular matrix. */
export function parseMatrixCsv(text: string, path = '<string>'): number[][] {
    const rows: number[][] = [];
    const lines = text.split('\n');
    for (let i = 0; i < lines.length; i++) {
        const line = lines[i].trim();
        if (line === '') continue;
        const values = line.split(',').map((field) => Number(field));
        const bad = values.findIndex((v) => !Number.isFinite(v));
        if (bad >= 0) {
            throw new FormatError(path, i + 1, `non-numeric field ${bad + 1}`);
        }
        if (rows.length > 0 && values.length !== rows[0].length) {
            throw new FormatError(path, i + 1, 'ragged row');
        }
        rows.push(values);
    }
    if (rows.length === 0) {
        throw new FormatError(path, 1, 'empty matrix');
    }
    return rows;
}

export function readMatrixCsv(path: string): number[][] {
    if (!fs.existsSync(path)) {
        throw new MissingFile(path);
    }
    return parseMatrixCsv(fs.readFileSync(path, 'utf8'), path);
}
