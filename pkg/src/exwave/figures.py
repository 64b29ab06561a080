"""Static figure rendering for the CLI report path.

Each run subcommand that writes delimited output also renders a matplotlib
figure next to it.  Figures are diagnostic companions to the CSV files,
never a data contract; plotting is headless (Agg).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def timeseries_figure(times, series: dict, path, title: str) -> None:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    ax0.plot(times, series["energy_v"], lw=1.2)
    ax0.set_xlabel("t")
    ax0.set_ylabel("energy of low part")
    for key, style in (("hs_u", "-"), ("hsc_w", "--"), ("linf_u", ":")):
        ax1.plot(times, series[key], style, lw=1.2, label=key)
    ax1.set_xlabel("t")
    ax1.set_ylabel("norms")
    ax1.legend(fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def truncation_figure(rows: list[dict], et_slope: float, hs_slope: float, path) -> None:
    js = np.array([row["J"] for row in rows], dtype=float)
    et = np.array([row["E_T"] for row in rows])
    ts = np.array([row["T"] for row in rows])
    hs = np.array([row["sup_hs_u"] for row in rows])

    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    ax0.plot(js, np.log2(et), "o-")
    ax0.plot(js, np.log2(et[0]) + et_slope * (js - js[0]), "k--", lw=0.8,
             label=f"fit slope {et_slope:.3f}")
    ax0.set_xlabel("J")
    ax0.set_ylabel("log2 E_T")
    ax0.legend(fontsize=8)
    ax1.loglog(ts, hs, "o-", label=f"fit slope {hs_slope:.3f}")
    ax1.set_xlabel("window T")
    ax1.set_ylabel("sup ||u||_{H^s}")
    ax1.legend(fontsize=8)
    fig.suptitle("truncation scan")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def decay_figure(points, slope: float, intercept: float, path) -> None:
    ts = np.array([t for t, _ in points])
    vals = np.array([v for _, v in points])
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    ax.loglog(ts, vals, "o", ms=4)
    ax.loglog(ts, math.exp(intercept) * ts**slope, "k--", lw=0.9,
              label=f"fit slope {slope:.3f}")
    ax.set_xlabel("t")
    ax.set_ylabel("sup norm of free evolution")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def inequalities_figure(sobolev_reports, bernstein_points, bern_slope: float, path) -> None:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.5, 3.6))
    width = 0.35
    for i, rep in enumerate(sobolev_reports):
        sigmas = sorted(rep.per_width)
        xs = np.arange(len(sigmas))
        ax0.bar(xs + i * width, [rep.per_width[s] for s in sigmas], width,
                label=f"p = {rep.p:g}")
        ax0.set_xticks(xs + width / 2, [f"{s:g}" for s in sigmas])
    ax0.set_xlabel("bump width")
    ax0.set_ylabel("max weighted-sup ratio")
    ax0.legend(fontsize=8)
    if bernstein_points:
        ns = np.array([n for n, _ in bernstein_points])
        rs = np.array([v for _, v in bernstein_points])
        ax1.loglog(ns, rs, "o-", label=f"fit slope {bern_slope:.3f}")
        ax1.set_xlabel("dyadic N")
        ax1.set_ylabel("projection norm ratio")
        ax1.legend(fontsize=8)
    fig.suptitle("inequality checks")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
