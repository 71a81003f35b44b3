"""
Figure rendering for the report paths. Each plot lands next to the
delimited output it visualizes.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _errorbar(ax, xs, results, label=None):
    means = [r.summary.mean_pct for _, r in results]
    stds = [r.summary.std_pct for _, r in results]
    ax.errorbar(xs, means, yerr=stds, marker="o", capsize=3, label=label)


def plot_epsilon_sweep(results, path, title="F-measure vs band width"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _errorbar(ax, [e for e, _ in results], results)
    ax.set_xlabel("epsilon")
    ax.set_ylabel("mean F-measure (%)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_fraction_sweep(results, path, title="F-measure vs labeled fraction"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    _errorbar(ax, [f for f, _ in results], results)
    ax.set_xlabel("labeled fraction")
    ax.set_ylabel("mean F-measure (%)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_method_comparison(results, path, title="Method comparison"):
    methods = [m for m, _ in results]
    means = [r.summary.mean_pct for _, r in results]
    stds = [r.summary.std_pct for _, r in results]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(range(len(methods)), means, yerr=stds, capsize=4)
    ax.set_xticks(range(len(methods)))
    ax.set_xticklabels(methods)
    ax.set_ylabel("mean F-measure (%)")
    ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_objective_trace(trace, path, title="Clustering objective"):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(range(1, len(trace) + 1), trace, marker=".")
    ax.set_xlabel("iteration")
    ax.set_ylabel("objective")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
