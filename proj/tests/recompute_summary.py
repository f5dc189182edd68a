"""Recompute the acquisition-error summary from a CSV trace, independently
of the simulator, and compare it with what `toolsim run` printed.

usage: recompute_summary.py <toolsim> <scenario> <workdir>
"""
import csv
import os
import re
import subprocess
import sys


def main() -> int:
    tool, scenario, work = sys.argv[1:4]
    os.makedirs(work, exist_ok=True)
    trace = os.path.join(work, "trace.csv")
    out = subprocess.run([tool, "run", scenario, "--trace", trace],
                         check=True, capture_output=True, text=True).stdout
    printed = dict(re.findall(r"^(\w+)\s+(\S+)$", out, re.MULTILINE))

    errors = []
    pulses = 0
    with open(trace, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        if row["adc_code"] != "":
            code = int(row["adc_code"])
            errors.append(abs((code + 0.5) * 5.0 / 256.0 - float(row["held_v"])))
        pulses = int(row["pulses_emitted"])

    delivered = int(printed["delivered_samples"])
    dropped = int(rows[-1]["dropped_samples"])
    # Completions the host has not yet taken at the end of the run.
    pending = len(errors) - dropped - delivered
    if pending not in (0, 1):
        print(f"completions {len(errors)} vs delivered {delivered} + dropped {dropped}")
        return 1
    errors = errors[:delivered]
    mean = sum(errors) / len(errors)
    worst = max(errors)

    ok = True
    for name, mine in (("mean_abs_acquisition_error_v", mean),
                       ("max_abs_acquisition_error_v", worst)):
        theirs = float(printed[name])
        good = abs(mine - theirs) <= 1e-8
        ok = ok and good
        print(f"{name}: toolsim {theirs:.9g} recomputed {mine:.9g} {'ok' if good else 'MISMATCH'}")
    if int(printed["pulses_emitted"]) != pulses:
        print(f"pulses_emitted mismatch {printed['pulses_emitted']} vs {pulses}")
        ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
