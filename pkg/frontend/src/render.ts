import { writeFileSync, mkdirSync } from "node:fs";
import { dirname } from "node:path";

import { CsvError, Table, column, readCsv, requireHeader } from "./csv.js";
import { FIGURES } from "./figures.js";
import { Series, heatmap, lineChart } from "./svg.js";

export function renderFigure(figureId: string, csvPaths: string[], outPath: string): void {
  const spec = FIGURES[figureId];
  if (!spec) {
    throw new CsvError(
      `unknown figure id ${figureId}; known: ${Object.keys(FIGURES).sort().join(", ")}`,
    );
  }
  if (csvPaths.length === 0) throw new CsvError("at least one --csv is required");
  const tables = csvPaths.map(readCsv);
  for (const t of tables) requireHeader(t, spec.header);

  let svg: string;
  switch (spec.kind) {
    case "lifetime-lines": {
      const series: Series[] = tables.map((t) => ({
        x: column(t, spec.header[0]),
        y: column(t, "T_alpha_us"),
        label: t.label,
      }));
      svg = lineChart(series, {
        title: figureId,
        xLabel: spec.xLabel,
        yLabel: spec.yLabel,
        logY: true,
      });
      break;
    }
    case "steady-lines": {
      const series: Series[] = tables.flatMap((t) => [
        { x: column(t, "eps2_over_K"), y: column(t, "P1"), label: `${t.label} P1` },
        { x: column(t, "eps2_over_K"), y: column(t, "P2"), label: `${t.label} P2` },
        {
          x: column(t, "eps2_over_K"),
          y: column(t, "P_leak"),
          label: `${t.label} P_leak`,
          dashed: true,
        },
      ]);
      svg = lineChart(series, { title: figureId, xLabel: spec.xLabel, yLabel: spec.yLabel });
      break;
    }
    case "ramp-lines": {
      const t = tables[0];
      svg = lineChart(
        [
          { x: column(t, "t_us"), y: column(t, "overlap"), label: "overlap" },
          { x: column(t, "t_us"), y: column(t, "photon_number"), label: "<n>", dashed: true },
        ],
        { title: figureId, xLabel: spec.xLabel, yLabel: spec.yLabel },
      );
      break;
    }
    case "spectrum-lines": {
      const series: Series[] = [];
      for (const t of tables) {
        const pairs = Array.from(new Set(column(t, "pair"))).sort((a, b) => a - b);
        for (const m of pairs) {
          const mask = column(t, "pair").map((v) => v === m);
          const xs = column(t, spec.header[0]).filter((_, i) => mask[i]);
          for (const which of ["excitation_even_over_K", "excitation_odd_over_K"] as const) {
            series.push({
              x: xs,
              y: column(t, which).filter((_, i) => mask[i]),
              label: `${t.label} m=${m}${which.includes("odd") ? "-" : "+"}`,
              dashed: which.includes("odd"),
            });
          }
        }
      }
      svg = lineChart(series, { title: figureId, xLabel: spec.xLabel, yLabel: spec.yLabel });
      break;
    }
    case "floquet-lines": {
      const series: Series[] = [];
      for (const t of tables) {
        const levels = Array.from(new Set(column(t, "level"))).sort((a, b) => a - b);
        for (const n of levels) {
          const mask = column(t, "level").map((v) => v === n);
          const xs = column(t, "eps2_over_K").filter((_, i) => mask[i]);
          series.push({
            x: xs,
            y: column(t, "quasi_over_K").filter((_, i) => mask[i]),
            label: `quasi n=${n}`,
          });
          series.push({
            x: xs,
            y: column(t, "effective_over_K").filter((_, i) => mask[i]),
            label: `eff n=${n}`,
            dashed: true,
          });
        }
      }
      svg = lineChart(series, { title: figureId, xLabel: spec.xLabel, yLabel: spec.yLabel });
      break;
    }
    case "heatmap-wigner": {
      const t = tables[0];
      svg = heatmap(column(t, "x"), column(t, "p"), column(t, "W"), {
        title: `${figureId} (${t.label})`,
        xLabel: spec.xLabel,
        yLabel: spec.yLabel,
        diverging: true,
      });
      break;
    }
    case "heatmap-surface": {
      const t = tables[0];
      svg = heatmap(column(t, "x"), column(t, "p"), column(t, "E_cl_over_K"), {
        title: `${figureId} (${t.label})`,
        xLabel: spec.xLabel,
        yLabel: spec.yLabel,
      });
      break;
    }
    case "heatmap-lifetime": {
      const t = tables[0];
      svg = heatmap(
        column(t, "delta_over_K"),
        column(t, "eps2_over_K"),
        column(t, "T_alpha_us"),
        {
          title: `${figureId} (${t.label})`,
          xLabel: spec.xLabel,
          yLabel: spec.yLabel,
          logColor: true,
        },
      );
      break;
    }
    default:
      throw new CsvError(`figure kind ${spec.kind} not implemented`);
  }
  mkdirSync(dirname(outPath) || ".", { recursive: true });
  writeFileSync(outPath, svg + "\n", "utf8");
}
