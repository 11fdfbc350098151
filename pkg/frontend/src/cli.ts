/**
 * Figure CLI:
 *   decay <series.csv> <summary.csv> <out.svg>
 *   sweep <sweep.csv> <constants.csv> <out.svg>
 *
 * Nonzero exit with a message on missing columns, empty inputs, or series
 * without positive samples.
 */

import { writeFileSync } from "fs";

import { readTable } from "./csv";
import { buildDecayFigure } from "./decay";
import { buildSweepFigure } from "./sweep";

export function main(argv: string[]): number {
  const [command, inputA, inputB, output] = argv;
  if (!command || !inputA || !inputB || !output) {
    console.error(
      "usage: decay <series.csv> <summary.csv> <out.svg> | sweep <sweep.csv> <constants.csv> <out.svg>"
    );
    return 2;
  }
  try {
    let svg: string;
    if (command === "decay") {
      svg = buildDecayFigure(readTable(inputA), readTable(inputB));
    } else if (command === "sweep") {
      svg = buildSweepFigure(readTable(inputA), readTable(inputB));
    } else {
      console.error(`unknown command '${command}'`);
      return 2;
    }
    writeFileSync(output, svg);
    console.log(`wrote ${output}`);
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
