import * as fs from 'node:fs';
import * as path from 'node:path';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { MissingFile, FormatError, readMatrixCsv } from './csv.js';
import { renderPanel, ShapeMismatch } from './panel.js';

export function main(argv: string[]): number {
    const args = yargs(argv)
        .usage('figures --true A.csv --full B.csv --lt C.csv --hs D.csv ' +
               '--title "Delta-Diag" --out fig1.svg')
        .option('true', { type: 'string', demandOption: true,
                          describe: 'true-structure matrix CSV' })
        .option('full', { type: 'string', demandOption: true,
                          describe: 'Full-NOWI posterior-mean CSV' })
        .option('lt', { type: 'string', demandOption: true,
                        describe: 'LT-NOWI posterior-mean CSV' })
        .option('hs', { type: 'string', demandOption: true,
                        describe: 'LT-HSGHS posterior-mean CSV' })
        .option('title', { type: 'string', default: '' })
        .option('out', { type: 'string', demandOption: true })
        .exitProcess(false)
        .strict()
        .parseSync();

    try {
        const svg = renderPanel({
            title: args.title,
            matrices: {
                true: readMatrixCsv(args.true),
                full: readMatrixCsv(args.full),
                lt: readMatrixCsv(args.lt),
                hs: readMatrixCsv(args.hs),
            },
        });
        let out = args.out;
        if (out.toLowerCase().endsWith('.png')) {
            out = out.slice(0, -4) + '.svg';
            process.stderr.write(
                `figures: output is SVG; writing ${out} instead\n`);
        }
        fs.mkdirSync(path.dirname(path.resolve(out)), { recursive: true });
        fs.writeFileSync(out, svg + '\n');
        process.stdout.write(`${out}\n`);
        return 0;
    } catch (err) {
        if (err instanceof MissingFile || err instanceof FormatError ||
            err instanceof ShapeMismatch) {
            process.stderr.write(`figures: ${err.message}\n`);
            return 1;
        }
        throw err;
    }
}

const invokedDirectly = process.argv[1] !== undefined &&
    import.meta.url.endsWith(path.basename(process.argv[1]));
if (invokedDirectly) {
    process.exit(main(hideBin(process.argv)));
}
