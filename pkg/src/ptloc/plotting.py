"""Figure rendering for the CLI report path.

Each renderer takes the dataset already emitted by the corresponding
subcommand (columns + rows) and writes a PNG next to the delimited
output.  Rendering is optional downstream of the data and never feeds
back into it.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _col(columns, rows, name):
    i = columns.index(name)
    return [r[i] for r in rows]


def render_figure1(columns, rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ns = sorted(set(int(v) for v in _col(columns, rows, "n")))
    for n in ns:
        sub = [r for r in rows if int(r[columns.index("n")]) == n]
        ax.plot(_col(columns, sub, "varphi"), _col(columns, sub, "m_z"),
                label=f"n = {n}")
    ax.set_xlabel(r"extension angle $\varphi$")
    ax.set_ylabel(r"$m\,z^n_\varphi$")
    ax.set_title("Position eigenvalue lattice across the extension family")
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_figure2(columns, rows, path):
    mtaus = sorted(set(_col(columns, rows, "m_tau")))
    fig, axes = plt.subplots(1, len(mtaus), figsize=(3.0 * len(mtaus), 3.2),
                             sharey=True)
    if len(mtaus) == 1:
        axes = [axes]
    for ax, mt in zip(axes, mtaus):
        sub = [r for r in rows if r[columns.index("m_tau")] == mt]
        ax.bar(_col(columns, sub, "n"), _col(columns, sub, "P_n"),
               color="C0", width=0.8)
        ax.set_title(rf"$m\tau = {mt:g}$")
        ax.set_xlabel("n")
    axes[0].set_ylabel(r"$P_n(\tau)$")
    fig.suptitle("Site detection probabilities of an initially localized state")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_figure3(columns, rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ns = sorted(set(int(v) for v in _col(columns, rows, "n")))
    for n in ns:
        sub = [r for r in rows if int(r[columns.index("n")]) == n]
        ax.plot(_col(columns, sub, "m_tau"), _col(columns, sub, "P_n"),
                label=f"n = {n}")
    ax.set_xlabel(r"$m\tau$")
    ax.set_ylabel(r"$P_n(\tau)$")
    ax.set_title("Detection probabilities emerge instantly outside the cone")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_spectrum(columns, rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(_col(columns, rows, "n"), _col(columns, rows, "m_z"), "o")
    ax.set_xlabel("n")
    ax.set_ylabel(r"$m\,z^n_\varphi$")
    ax.set_title("Discrete spectrum of one self-adjoint extension")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_povm_prob(columns, rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xname = columns[0]
    ax.plot(_col(columns, rows, xname), _col(columns, rows, "density"))
    ax.set_xlabel(xname)
    ax.set_ylabel("outcome density")
    ax.set_title("POVM outcome density")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_kernel(columns, rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = _col(columns, rows, columns[0])
    ax.plot(x, _col(columns, rows, "computed"), label="computed")
    ax.plot(x, _col(columns, rows, "analytic"), "--", label="analytic")
    ax.set_xlabel(columns[0])
    ax.set_ylabel("kernel")
    ax.set_title("Overlap kernel against its closed form")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_tails(columns, rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    i_prof = columns.index("profile")
    for name in sorted(set(r[i_prof] for r in rows)):
        sub = [r for r in rows if r[i_prof] == name]
        ax.loglog(_col(columns, sub, "window_lo"),
                  _col(columns, sub, "rate_A"), "o-", label=name)
    ax.set_xlabel(r"window start $m z$")
    ax.set_ylabel("fitted exponential rate A")
    ax.set_title("Exponential rate vanishes under window growth")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


RENDERERS = {
    "figure1": render_figure1,
    "figure2": render_figure2,
    "figure3": render_figure3,
    "spectrum": render_spectrum,
    "povm-prob": render_povm_prob,
    "kernel": render_kernel,
    "tails": render_tails,
}
