"""Sweep datasets over (lambda, n, alpha, z) and figure rendering.

A sweep fixes the unit budget m = s = lambda (the bounds depend on the
threshold only through z = (x - m)/sqrt(s), lambda and n, so this loses
nothing) and tabulates, per panel (lambda, n):

* the exact lattice tail as the alpha = 0 rows,
* the optimal alpha = 3 lattice bound and its exponential limit,
* the normal-law alpha = 2 bound and its exponential limit.

Rows can be written as CSV or JSON lines with a fixed column order and
a total ordering, so identical configurations produce byte-identical
files.  The same rows drive the rendered panels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Sequence

from . import bounds, laws
from .errors import ConstraintError
from .laws import Family, ReferenceLaw

__all__ = [
    "SweepRow",
    "CSV_COLUMNS",
    "uniform_z_grid",
    "sweep",
    "true_tail",
    "figure_dataset",
    "comparison_curve",
    "write_csv",
    "write_jsonl",
    "render_panels",
    "render_comparison",
]

CSV_COLUMNS = ("lambda", "n", "family", "alpha", "z", "x", "value", "log10_value")

_LATTICE_ALPHAS = ("0", "3", "inf")
_NORMAL_ALPHAS = ("2", "inf")


@dataclass(frozen=True)
class SweepRow:
    """One bound (or exact-tail) evaluation in a sweep."""

    lam: float
    n: int | None
    family: str
    alpha: str
    z: float
    x: float
    value: float

    @property
    def log10_value(self) -> float:
        return math.log10(self.value) if self.value > 0.0 else -math.inf


def _sort_key(row: SweepRow):
    return (
        row.lam,
        math.inf if row.n is None else row.n,
        row.family,
        math.inf if row.alpha == "inf" else int(row.alpha),
        row.z,
    )


def true_tail(law: ReferenceLaw, x: float) -> float:
    """Exact P(eta <= x) for the reference law itself.

    Lattice laws get the exact cdf (thresholds within 1e-9 of a lattice
    point, in unit-lattice coordinates, count as hitting it); the normal
    law gets Phi(z) for completeness.
    """
    if law.is_lattice:
        return laws.lattice_cdf(law, int(math.floor(x / law.step + 1e-9)))
    return laws.std_normal_cdf(law.budget.z_of_x(x))


def uniform_z_grid(lam: float, count: int) -> list[float]:
    """count evenly spaced z values strictly inside (-sqrt(lam), 0)."""
    if count < 1:
        raise ConstraintError(f"grid size must be positive, got {count}")
    rl = math.sqrt(lam)
    return [-rl * (count - i) / (count + 1.0) for i in range(count)]


def _normalize_alpha(alpha) -> str:
    tag = str(alpha)
    if tag in ("0", "2", "3", "inf"):
        return tag
    raise ConstraintError(f"sweep alphas must come from {{0, 2, 3, inf}}, got {alpha!r}")


def sweep(
    lambdas: Sequence[float],
    ns: Sequence[int | None],
    alphas: Iterable,
    z_grid: Mapping[float, Sequence[float]] | Sequence[float],
) -> list[SweepRow]:
    """One row per (lambda, n, family, alpha, z), sorted by that key.

    z_grid maps each lambda to its z values (or is one sequence reused
    for every lambda); each z must lie in (-sqrt(lambda), 0).  Lattice
    rows carry alpha in {0, 3, inf} and the family says whether n is
    finite (binomial) or not (poisson); normal rows carry alpha in
    {2, inf} and repeat per n because they belong to that panel, even
    though their values do not depend on n.
    """
    tags = {_normalize_alpha(a) for a in alphas}
    rows: list[SweepRow] = []
    for lam in lambdas:
        zs = z_grid[lam] if isinstance(z_grid, Mapping) else z_grid
        rl = math.sqrt(lam)
        for z in zs:
            if not (-rl < z < 0.0):
                raise ConstraintError(
                    f"z = {z} outside (-sqrt(lambda), 0) for lambda = {lam}"
                )
        normal = laws.shifted_normal(lam, lam)
        for n in ns:
            lattice = (
                laws.scaled_poisson(lam, lam)
                if n is None
                else laws.scaled_binomial(lam, lam, n)
            )
            lattice_name = lattice.family.value
            for z in zs:
                x = lattice.budget.x_of_z(float(z))
                if "0" in tags:
                    rows.append(
                        SweepRow(lam, n, lattice_name, "0", float(z), x, true_tail(lattice, x))
                    )
                if "3" in tags:
                    value = bounds.left_tail_bound(lattice, 3, x).value
                    rows.append(SweepRow(lam, n, lattice_name, "3", float(z), x, value))
                if "inf" in tags:
                    rows.append(
                        SweepRow(
                            lam, n, lattice_name, "inf", float(z), x,
                            bounds.exponential_bound(lattice, x),
                        )
                    )
                    rows.append(
                        SweepRow(
                            lam, n, "normal", "inf", float(z), x,
                            bounds.exponential_bound(normal, x),
                        )
                    )
                if "2" in tags:
                    value = bounds.left_tail_bound(normal, 2, x).value
                    rows.append(SweepRow(lam, n, "normal", "2", float(z), x, value))
    rows.sort(key=_sort_key)
    return rows


def figure_dataset(points: int = 200) -> list[SweepRow]:
    """The six-panel comparison dataset: lambda in {3, 10}, n in {11, 30, inf}."""
    lambdas = (3.0, 10.0)
    grids = {lam: uniform_z_grid(lam, points) for lam in lambdas}
    return sweep(lambdas, (11, 30, None), ("0", "2", "3", "inf"), grids)


def comparison_curve(lambdas: Sequence[float], x: float = 1.0) -> list[SweepRow]:
    """The alpha = 3 Poisson-family bound at a fixed threshold, against lambda."""
    rows = []
    for lam in lambdas:
        law = laws.scaled_poisson(float(lam), float(lam))
        value = bounds.left_tail_bound(law, 3, x).value
        rows.append(
            SweepRow(float(lam), None, "poisson", "3", law.budget.z_of_x(x), x, value)
        )
    rows.sort(key=_sort_key)
    return rows


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------


def _n_text(n: int | None) -> str:
    return "inf" if n is None else str(n)


def _log10_text(row: SweepRow) -> str:
    v = row.log10_value
    return "-inf" if v == -math.inf else repr(v)


def write_csv(rows: Sequence[SweepRow], fh: IO[str]) -> None:
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for row in sorted(rows, key=_sort_key):
        fh.write(
            ",".join(
                (
                    repr(float(row.lam)),
                    _n_text(row.n),
                    row.family,
                    row.alpha,
                    repr(float(row.z)),
                    repr(float(row.x)),
                    repr(float(row.value)),
                    _log10_text(row),
                )
            )
            + "\n"
        )


def write_jsonl(rows: Sequence[SweepRow], fh: IO[str]) -> None:
    for row in sorted(rows, key=_sort_key):
        log10 = row.log10_value
        fh.write(
            json.dumps(
                {
                    "lambda": float(row.lam),
                    "n": _n_text(row.n),
                    "family": row.family,
                    "alpha": row.alpha,
                    "z": float(row.z),
                    "x": float(row.x),
                    "value": float(row.value),
                    "log10_value": "-inf" if log10 == -math.inf else log10,
                }
            )
            + "\n"
        )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_SERIES_STYLE = {
    # (lattice?, alpha) -> label, color, linestyle
    (True, "0"): ("exact tail", "0.45", "-"),
    (True, "3"): ("lattice alpha=3", "C3", "-"),
    (True, "inf"): ("lattice exponential", "C3", "--"),
    (False, "2"): ("normal alpha=2", "black", "-"),
    (False, "inf"): ("normal exponential", "black", "--"),
}


def _panel_series(rows: Sequence[SweepRow]):
    series: dict[tuple[bool, str], list[SweepRow]] = {}
    for row in rows:
        key = (row.family != "normal", row.alpha)
        series.setdefault(key, []).append(row)
    for members in series.values():
        members.sort(key=lambda r: r.z)
    return series


def render_panels(rows: Sequence[SweepRow], out_dir, stem: str = "left-tail") -> list[str]:
    """Render one PNG per lambda, one panel per n, curves in log10 scale.

    Every panel also shows the standardized combined bound
    min(1, 1/(1+z^2), (e^2/2)*Phi(z)) as a dotted reference curve.
    Returns the written paths.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []
    lambdas = sorted({row.lam for row in rows})
    for lam in lambdas:
        panel_ns = sorted(
            {row.n for row in rows if row.lam == lam},
            key=lambda n: math.inf if n is None else n,
        )
        fig, axes = plt.subplots(
            1, len(panel_ns), figsize=(4.2 * len(panel_ns), 3.6), sharey=True, squeeze=False
        )
        for ax, n in zip(axes[0], panel_ns):
            panel_rows = [row for row in rows if row.lam == lam and row.n == n]
            series = _panel_series(panel_rows)
            for key, members in sorted(series.items()):
                style = _SERIES_STYLE.get(key)
                if style is None:
                    continue
                label, color, dashes = style
                zs = [row.z for row in members]
                ys = [row.log10_value for row in members]
                ys = [y if y > -math.inf else math.nan for y in ys]
                drawstyle = "steps-post" if key == (True, "0") else "default"
                ax.plot(zs, ys, color=color, linestyle=dashes, label=label,
                        drawstyle=drawstyle, linewidth=1.4)
            zs = sorted({row.z for row in panel_rows})
            ref = [math.log10(bounds.cantelli_combined(z)) for z in zs]
            ax.plot(zs, ref, color="green", linestyle=":", label="combined std bound", linewidth=1.4)
            ax.set_title(f"lambda={lam:g}, n={_n_text(n)}")
            ax.set_xlabel("z")
            ax.grid(True, alpha=0.25)
        axes[0][0].set_ylabel("log10 probability")
        axes[0][0].legend(fontsize=8, loc="lower right")
        fig.tight_layout()
        path = out / f"{stem}-lambda-{lam:g}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(str(path))
    return written


def render_comparison(rows: Sequence[SweepRow], out_dir, stem: str = "threshold-curve") -> str:
    """Render the fixed-threshold comparison curve (value against lambda)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ordered = sorted(rows, key=lambda r: r.lam)
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot([r.lam for r in ordered], [r.value for r in ordered], color="C3", linewidth=1.4)
    ax.set_yscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("bound value")
    x = ordered[0].x if ordered else 1.0
    ax.set_title(f"alpha=3 Poisson-family bound at x={x:g}")
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    path = out / f"{stem}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
