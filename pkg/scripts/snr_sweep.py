"""Test accuracy of the audio models as the synthetic corpus gets noisier.

    python scripts/snr_sweep.py --work /tmp/sweep --snr 10,0,-10
"""

import argparse
import contextlib
import io
import sys
from pathlib import Path

from voxscreen.eval import EvalReport
from voxscreen.synth import run_pipeline


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--work", required=True)
    p.add_argument("--snr", default="10,0,-10", help="comma list of SNR values in dB")
    p.add_argument("--models", default="lstm,cnn")
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--n", type=int, default=120)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    models = tuple(m.strip() for m in args.models.split(","))
    print("snr_db," + ",".join(models))
    for snr in (float(s) for s in args.snr.split(",")):
        with contextlib.redirect_stdout(io.StringIO()):
            out = run_pipeline(Path(args.work) / f"snr_{snr:g}", seed=args.seed, models=models,
                               n=args.n, epochs=args.epochs, snr_db=snr)
        accs = [EvalReport.load(out[m] / "report.json").metrics.accuracy for m in models]
        print(f"{snr:g}," + ",".join(f"{a:.3f}" for a in accs), flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
