"""Figure recipes: one builder per figure id, all pure views over CSVs.

Input layout per figure (files inside the recipe's input directory):

  fig2  displacement.csv, greens.csv, gammas.csv
  fig3  trajectory_phonons.csv, trajectory_no_phonons.csv, pulse.csv
  fig4  comparison.csv
  fig5  points_phonons_const_dephasing.csv, points_temp_dephasing_only.csv,
        points_both.csv
  fig6  points_phonons.csv, points_no_phonons.csv        (axis: gamma')
  fig7  points_phonons.csv, points_no_phonons.csv        (axis: detuning)
  fig8  points_resonant_phonons.csv, points_resonant_no_phonons.csv,
        points_detuned_phonons.csv, points_detuned_no_phonons.csv
  fig9  spectrum_resonant.csv, spectrum_detuned.csv,
        eigenenergies_resonant.csv, eigenenergies_detuned.csv
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schemas import RecipeError, eigenenergy_table, load_table  # noqa: E402

DPI = 150
FULL = (8.0, 6.0)
WIDE = (8.0, 3.2)


@dataclass(frozen=True)
class FigureRecipe:
    """One render job: figure id, input directory, output image path."""

    figure: str
    input_dir: Path
    output: Path

    def path(self, name: str) -> Path:
        return Path(self.input_dir) / name


def render(recipe: FigureRecipe) -> Path:
    """Validate inputs, draw the figure, write the image, return its path.

    All inputs are loaded (and therefore validated) before the output file
    is opened, so a schema error never leaves a partial image behind.
    """
    if recipe.figure not in FIGURES:
        raise RecipeError(f"unknown figure {recipe.figure!r}; "
                          f"choose from {sorted(FIGURES)}")
    builder = FIGURES[recipe.figure]
    fig = builder(recipe)
    out = Path(recipe.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=DPI, metadata={"Software": "cascade-figures"})
    plt.close(fig)
    return out


def _grouped(table, group_col, x_col, y_col):
    """Yield (group value, x array, y array) in first-appearance order."""
    seen = []
    for val in table[group_col]:
        if val not in seen:
            seen.append(val)
    for val in seen:
        mask = table[group_col] == val
        yield val, table[x_col][mask], table[y_col][mask]


def _fig2(recipe):
    disp = load_table(recipe.path("displacement.csv"), "displacement")
    greens = load_table(recipe.path("greens.csv"), "greens")
    gammas = load_table(recipe.path("gammas.csv"), "gammas")
    fig, axes = plt.subplots(3, 1, figsize=FULL)
    ax = axes[0]
    for alpha, t, b in _grouped(disp, "alpha", "temperature",
                                "mean_displacement"):
        ax.plot(t, b, label=f"coupling {alpha:g} ns$^2$")
    ax.set_xlabel("temperature (K)")
    ax.set_ylabel(r"$\langle B \rangle$")
    ax.legend(fontsize=8)
    ax2 = axes[1]
    for temp, tau, re_gg in _grouped(greens, "temperature", "tau", "re_gg"):
        ax2.plot(tau * 1e3, re_gg, label=f"{temp:g} K")
    ax2.set_xlabel("delay (ps)")
    ax2.set_ylabel(r"Re $G_g(\tau)$")
    ax2.legend(fontsize=8)
    ax3 = axes[2]
    for temp, om, re_g in _grouped(gammas, "temperature", "omega",
                                   "re_gamma_g"):
        ax3.plot(om, re_g, label=f"{temp:g} K")
    ax3.set_xlabel(r"$\omega$ (ns$^{-1}$)")
    ax3.set_ylabel(r"Re $\Gamma_g(\omega)$")
    ax3.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _fig3(recipe):
    with_ph = load_table(recipe.path("trajectory_phonons.csv"), "trajectory")
    no_ph = load_table(recipe.path("trajectory_no_phonons.csv"), "trajectory")
    pulse = load_table(recipe.path("pulse.csv"), "pulse")
    fig = plt.figure(figsize=FULL)
    gs = fig.add_gridspec(3, 1, height_ratios=(2.2, 1.2, 1.0))
    ax = fig.add_subplot(gs[0])
    for table, style, label in ((no_ph, "-", "no phonons"),
                                (with_ph, "--", "phonons")):
        ax.plot(table["t"], table["rho_x"], "r" + style,
                label=f"X ({label})")
        ax.plot(table["t"], table["rho_xx"], "k" + style,
                label=f"XX ({label})")
        ax.plot(table["t"], table["n_cav"], "b" + style,
                label=f"cavity ({label})")
        ax.plot(table["t"], table["p_e"], "g" + style,
                label=f"emitted ({label})")
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("population")
    ax.legend(fontsize=7, ncol=2)
    ax_inset = fig.add_subplot(gs[1])
    t_end = min(pulse["t"][-1], with_ph["t"][-1])
    for table, style in ((no_ph, "-"), (with_ph, "--")):
        mask = table["t"] <= max(4 * t_end / 10, table["t"][5])
        ax_inset.plot(table["t"][mask], table["rho_x"][mask], "r" + style)
        ax_inset.plot(table["t"][mask], table["rho_xx"][mask], "k" + style)
    ax_inset.set_xlabel("t (ns)")
    ax_inset.set_ylabel("intermediate")
    ax_pulse = fig.add_subplot(gs[2])
    ax_pulse.plot(pulse["t"], pulse["omega_p"], "m-")
    ax_pulse.set_xlabel("t (ns)")
    ax_pulse.set_ylabel(r"$\Omega_p'(t)$ (ns$^{-1}$)")
    fig.tight_layout()
    return fig


def _fig4(recipe):
    cmp_table = load_table(recipe.path("comparison.csv"), "comparison")
    fig, axes = plt.subplots(2, 1, figsize=FULL, sharex=True)
    t = cmp_table["value"]
    axes[0].plot(t, cmp_table["n_e_fixed_primed"], "b-",
                 label="fixed effective couplings")
    axes[0].plot(t, cmp_table["n_e_fixed_bare"], "b--",
                 label="fixed bare couplings")
    axes[0].set_ylabel(r"$N_e$")
    axes[0].legend(fontsize=8)
    axes[1].plot(t, cmp_table["indist_fixed_primed"], "r-")
    axes[1].plot(t, cmp_table["indist_fixed_bare"], "r--")
    axes[1].set_ylabel("indistinguishability")
    axes[1].set_xlabel("temperature (K)")
    fig.tight_layout()
    return fig


def _sweep_panels(recipe, files_labels, xlabel):
    tables = [(load_table(recipe.path(name), "points"), label, style)
              for name, label, style in files_labels]
    fig, axes = plt.subplots(2, 1, figsize=FULL, sharex=True)
    for table, label, style in tables:
        axes[0].plot(table["value"], table["n_e"], style, label=label)
        axes[1].plot(table["value"], table["indistinguishability"], style,
                     label=label)
    axes[0].set_ylabel(r"$N_e$")
    axes[0].legend(fontsize=8)
    axes[1].set_ylabel("indistinguishability")
    axes[1].set_xlabel(xlabel)
    fig.tight_layout()
    return fig


def _fig5(recipe):
    return _sweep_panels(
        recipe,
        (("points_phonons_const_dephasing.csv", "phonons, constant gamma'",
          "C1--"),
         ("points_temp_dephasing_only.csv", "gamma'(T), no phonons", "m-"),
         ("points_both.csv", "phonons + gamma'(T)", "k-.")),
        "temperature (K)")


def _fig6(recipe):
    return _sweep_panels(
        recipe,
        (("points_no_phonons.csv", "no phonons", "C0-"),
         ("points_phonons.csv", "phonons", "C3--")),
        r"pure dephasing $\gamma'$ (ns$^{-1}$)")


def _fig7(recipe):
    return _sweep_panels(
        recipe,
        (("points_no_phonons.csv", "no phonons", "C0-"),
         ("points_phonons.csv", "phonons", "C3--")),
        r"detuning $\Delta$ (ns$^{-1}$)")


def _fig8(recipe):
    resonant = [(load_table(recipe.path(n), "points"), lbl, sty)
                for n, lbl, sty in
                (("points_resonant_no_phonons.csv", "no phonons", "-"),
                 ("points_resonant_phonons.csv", "phonons", "--"))]
    detuned = [(load_table(recipe.path(n), "points"), lbl, sty)
               for n, lbl, sty in
               (("points_detuned_no_phonons.csv", "no phonons", "-"),
                ("points_detuned_phonons.csv", "phonons", "--"))]
    fig, axes = plt.subplots(1, 2, figsize=WIDE, sharey=True)
    for ax, tables, title in ((axes[0], resonant, "resonant"),
                              (axes[1], detuned, "off-resonant")):
        for table, label, style in tables:
            ax.plot(table["value"], table["n_e"], "b" + style,
                    label=f"$N_e$ ({label})")
            ax.plot(table["value"], table["indistinguishability"],
                    "C1" + style, label=f"I ({label})")
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("pulse width (ns)")
    axes[0].set_ylabel("figure of merit")
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    return fig


def _fig9(recipe):
    spec_res = load_table(recipe.path("spectrum_resonant.csv"), "spectrum")
    spec_det = load_table(recipe.path("spectrum_detuned.csv"), "spectrum")
    t_res, eig_res = eigenenergy_table(recipe.path("eigenenergies_resonant.csv"))
    t_det, eig_det = eigenenergy_table(recipe.path("eigenenergies_detuned.csv"))
    fig, axes = plt.subplots(2, 2, figsize=FULL)
    for ax, table, title in ((axes[0, 0], spec_res, "resonant"),
                             (axes[0, 1], spec_det, "off-resonant")):
        ax.plot(table["omega"], table["s_c"], "b-")
        ax.set_title(title, fontsize=9)
        ax.set_xlabel(r"$\omega - \omega_c$ (ns$^{-1}$)")
        ax.set_ylabel(r"$S_c(\omega)$")
    for ax, (t, eig) in ((axes[1, 0], (t_res, eig_res)),
                         (axes[1, 1], (t_det, eig_det))):
        for k in range(eig.shape[1]):
            ax.plot(t, eig[:, k], lw=0.9)
        ax.set_xlabel("t (ns)")
        ax.set_ylabel("quasi-eigenenergy (ns$^{-1}$)")
    fig.tight_layout()
    return fig


FIGURES = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig9": _fig9,
}
