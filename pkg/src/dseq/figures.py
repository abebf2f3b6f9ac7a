"""Render plot series to image files (headless matplotlib)."""
from __future__ import annotations

_STYLE = {
    1: ("Percentage difference of 0s and 1s (unequal cases)", "% difference (0s - 1s)", 0.0),
    2: ("Percentage difference where 1s exceed 0s", "% difference (1s - 0s)", None),
    3: ("Ratio of 0s over 1s, base 3", "ratio n0 / n1", 1.0),
    4: ("Ratio of 0s over 2s, base 3", "ratio n0 / n2", 1.0),
}


def render_series(figure: int, series, path) -> None:
    """Scatter-plot a (p, value) series and save it to ``path``.

    The image format follows the file extension (png, pdf, svg, ...).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if figure not in _STYLE:
        raise ValueError(f"figure must be 1..4, got {figure}")
    title, ylabel, refline = _STYLE[figure]
    xs = [p for p, _ in series]
    ys = [v for _, v in series]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.scatter(xs, ys, s=4, linewidths=0, alpha=0.6)
    if refline is not None:
        ax.axhline(refline, color="gray", linewidth=0.8)
    ax.set_xlabel("prime p")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
