/** Registry: which columns each figure id expects and how it is drawn. */

export type FigureKind =
  | "lifetime-lines"
  | "steady-lines"
  | "ramp-lines"
  | "spectrum-lines"
  | "floquet-lines"
  | "heatmap-wigner"
  | "heatmap-surface"
  | "heatmap-lifetime"
  | "validity-table";

export interface FigureSpec {
  kind: FigureKind;
  header: string[];
  xLabel: string;
  yLabel: string;
}

const LIFETIME_EPS2 = ["eps2_over_K", "T_alpha_us", "lambda_re", "M_lv", "dim"];
const LIFETIME_DELTA = ["delta_over_K", "T_alpha_us", "lambda_re", "M_lv", "dim"];
const LIFETIME_DPHI = ["delta_phi", "T_alpha_us", "lambda_re", "M_lv", "dim"];
const SPECTRUM_DELTA = [
  "delta_over_K",
  "pair",
  "excitation_even_over_K",
  "excitation_odd_over_K",
  "splitting_over_K",
];
const SPECTRUM_EPS2 = [
  "eps2_over_K",
  "pair",
  "excitation_even_over_K",
  "excitation_odd_over_K",
  "splitting_over_K",
];

export const FIGURES: Record<string, FigureSpec> = {
  fig2a: {
    kind: "heatmap-surface",
    header: ["x", "p", "E_cl_over_K"],
    xLabel: "x",
    yLabel: "p",
  },
  fig2cd: {
    kind: "spectrum-lines",
    header: SPECTRUM_DELTA,
    xLabel: "Delta / K",
    yLabel: "|E - E0| / K",
  },
  fig3a: {
    kind: "floquet-lines",
    header: ["eps2_over_K", "level", "quasi_over_K", "effective_over_K"],
    xLabel: "eps2 / K",
    yLabel: "|e_n - e_0| / K",
  },
  fig3b: {
    kind: "ramp-lines",
    header: ["t_us", "overlap", "photon_number"],
    xLabel: "t (us)",
    yLabel: "overlap / photon number",
  },
  fig4: { kind: "lifetime-lines", header: LIFETIME_EPS2, xLabel: "eps2 / K", yLabel: "T_alpha (us)" },
  fig5: { kind: "lifetime-lines", header: LIFETIME_EPS2, xLabel: "eps2 / K", yLabel: "T_alpha (us)" },
  fig6a: {
    kind: "lifetime-lines",
    header: LIFETIME_DELTA,
    xLabel: "Delta / K",
    yLabel: "T_alpha (us)",
  },
  fig6b: {
    kind: "heatmap-lifetime",
    header: ["eps2_over_K", "delta_over_K", "T_alpha_us", "lambda_re", "M_lv", "dim"],
    xLabel: "Delta / K",
    yLabel: "eps2 / K",
  },
  fig7: {
    kind: "steady-lines",
    header: ["eps2_over_K", "P1", "P2", "P_leak"],
    xLabel: "eps2 / K",
    yLabel: "probability",
  },
  fig8: { kind: "heatmap-wigner", header: ["x", "p", "W"], xLabel: "x", yLabel: "p" },
  fig10: { kind: "lifetime-lines", header: LIFETIME_EPS2, xLabel: "eps2 / K", yLabel: "T_alpha (us)" },
  fig11: { kind: "lifetime-lines", header: LIFETIME_EPS2, xLabel: "eps2 / K", yLabel: "T_alpha (us)" },
  fig12: {
    kind: "lifetime-lines",
    header: LIFETIME_DPHI,
    xLabel: "modulation depth",
    yLabel: "T_alpha (us)",
  },
  fig13: {
    kind: "spectrum-lines",
    header: SPECTRUM_EPS2,
    xLabel: "eps2 / K",
    yLabel: "|E - E0| / K",
  },
  table1: {
    kind: "lifetime-lines",
    header: LIFETIME_DPHI,
    xLabel: "modulation depth",
    yLabel: "T_alpha (us)",
  },
};
