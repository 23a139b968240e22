"""Recompute accuracy, sensitivity and specificity from the published confusion matrices.

Prints the recomputed figures beside the published table values and flags
any gap above one percentage point.
"""

import sys

from voxscreen.eval import ConfusionMatrix, metrics

# (tn, fp, fn, tp)
MATRICES = {
    "LR": (60, 15, 19, 44),
    "SVM": (59, 16, 18, 45),
    "CNN": (60, 15, 13, 50),
    "LSTM": (67, 8, 7, 56),
}

# accuracy, sensitivity, specificity as printed in the results table
TABLE = {
    "LR": (75, 70, 80),
    "SVM": (75, 71, 79),
    "CNN": (80, 79, 80),
    "LSTM": (89, 89, 83),
}


def main() -> int:
    print(f"{'model':<6}{'metric':<13}{'table':>7}{'matrix':>9}  flag")
    gaps = 0
    for model, cm in MATRICES.items():
        m = metrics(ConfusionMatrix(*cm))
        for name, pub in zip(("accuracy", "sensitivity", "specificity"), TABLE[model]):
            got = 100 * getattr(m, name)
            flag = "MISMATCH" if abs(got - pub) > 1.0 else ""
            gaps += bool(flag)
            print(f"{model:<6}{name:<13}{pub:>6}%{got:>8.1f}%  {flag}")
    print(f"{gaps} table value(s) off by more than 1 pp")
    return 0


if __name__ == "__main__":
    sys.exit(main())
