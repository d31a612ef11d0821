"""Figures for audit reports and attack transcripts."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# distances at or below this are drawn on the floor of the log axis
FLOOR = 1e-17

RC = {
    "font.family": "serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 7,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.tight_layout()
    # no version stamp, so reruns give identical files
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def plot_audit(report, path, title=None):
    """Per-case trace distance to the fully mixed state, one dot per secret.

    Cases are grouped along x by (I, J) in sweep order; the tolerance is
    drawn as a dashed line.
    """
    groups = []
    for r in report.records:
        key = (r.I, r.J)
        if not groups or groups[-1][0] != key:
            groups.append((key, []))
        groups[-1][1].append(r)

    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.28 * len(groups) + 1.5), 3.2))
        for gx, (_, recs) in enumerate(groups):
            d = np.maximum([r.distance for r in recs], FLOOR)
            ok = np.array([r.passed for r in recs])
            jitter = np.linspace(-0.25, 0.25, len(recs)) if len(recs) > 1 else np.zeros(1)
            ax.scatter(gx + jitter[ok], d[ok], s=6, color="tab:blue", lw=0)
            ax.scatter(gx + jitter[~ok], d[~ok], s=8, color="tab:red", lw=0)
        ax.axhline(report.tol, color="k", ls="--", lw=0.8, label=f"tol = {report.tol:g}")
        ax.set_yscale("log")
        ax.set_ylim(FLOOR / 2, 2)
        ax.set_xticks(range(len(groups)))
        ax.set_xticklabels(
            ["I{%s} J{%s}" % (",".join(map(str, I)), ",".join(map(str, J))) for (I, J), _ in groups],
            rotation=90,
        )
        ax.set_ylabel("trace distance to I/d")
        verdict = "PASS" if report.passed else "FAIL"
        ax.set_title(title or f"strong security audit: {verdict}")
        ax.legend(loc="upper left", frameon=False)
        _save(fig, path)


def plot_attack(result, path, title=None):
    """Measurement distribution of the leak qudit after the attack map."""
    probs = np.asarray(result.distribution)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(3.6, 2.6))
        colors = ["tab:red" if i == result.recovered else "tab:gray" for i in range(len(probs))]
        ax.bar(np.arange(len(probs)), probs, color=colors)
        ax.set_xticks(np.arange(len(probs)))
        ax.set_ylim(0, 1.05)
        ax.set_xlabel("leak qudit value")
        ax.set_ylabel("probability")
        coord = result.leak.coordinate
        ax.set_title(title or f"recovered s_{coord} = {result.recovered}")
        _save(fig, path)
