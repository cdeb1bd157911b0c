from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

SIGNIFICANCE_LEVELS = (0.05, 0.01)
RELATIVE_SPREAD = 1e-12


@dataclass(frozen=True)
class TTestResult:
    mean_a: float
    mean_b: float
    std_a: float
    std_b: float
    t: float | None          # None when the test is degenerate
    df: int
    p_value: float | None
    significant_05: bool
    significant_01: bool
    degenerate: bool
    paired: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def critical_value(alpha: float, df: int) -> float:
    """Two-sided critical |t| at level alpha."""
    return float(stats.t.ppf(1.0 - alpha / 2.0, df))


def _flat(values: np.ndarray, center: float) -> bool:
    # k/10 fold accuracies carry rounding noise; a spread at that level is zero
    return bool(np.std(values, ddof=1) <= RELATIVE_SPREAD * max(1.0, abs(center)))


def paired_t_test(acc_a, acc_b, paired: bool = True) -> TTestResult:
    """Two-sided t-test of fold accuracies a against b; a positive t means a scored higher.

    Paired by default (df = n - 1). With paired=False an equal-variance
    two-sample test is run instead (df = 2n - 2).
    """
    a = np.asarray(acc_a, dtype=float)
    b = np.asarray(acc_b, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size} fold scores")
    if a.size < 2:
        raise ValueError(f"need at least 2 folds, got {a.size}")

    if paired:
        df = a.size - 1
        diff = a - b
        degenerate = _flat(diff, float(np.mean(diff)))
    else:
        df = 2 * a.size - 2
        degenerate = _flat(a, float(np.mean(a))) and _flat(b, float(np.mean(b)))

    summary = dict(
        mean_a=float(np.mean(a)),
        mean_b=float(np.mean(b)),
        std_a=float(np.std(a, ddof=1)),
        std_b=float(np.std(b, ddof=1)),
        df=df,
        paired=paired,
    )
    if degenerate:
        return TTestResult(t=None, p_value=None, significant_05=False, significant_01=False, degenerate=True, **summary)

    result = stats.ttest_rel(a, b) if paired else stats.ttest_ind(a, b, equal_var=True)
    t_value = float(result.statistic)
    return TTestResult(
        t=t_value,
        p_value=float(result.pvalue),
        significant_05=abs(t_value) > critical_value(0.05, df),
        significant_01=abs(t_value) > critical_value(0.01, df),
        degenerate=False,
        **summary,
    )
