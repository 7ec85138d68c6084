#!/usr/bin/env python3
# Copyright 2026 The vecopt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves exported LP models with HiGHS and compares against the exact solver.

usage: milp_highs_check.py VECOPT_CLI [TRAFFIC_MBPS ...]
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import highspy

TOLERANCE = 1e-6


def run(cli, *args):
    return subprocess.run([cli, *args], check=True, capture_output=True, text=True).stdout


def check_point(cli, traffic, workdir):
    solved = json.loads(run(cli, "solve", "--traffic", str(traffic), "--objective", "all",
                            "--solver", "exhaustive", "--json"))
    weights = ",".join(repr(w) for w in solved["weights"])
    lp = Path(workdir) / f"point_{traffic}.lp"
    run(cli, "export-milp", "--traffic", str(traffic), "--weights", weights,
        "--tight-big-m", "--out", str(lp))

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 1e-9)
    h.setOptionValue("mip_abs_gap", 1e-9)
    h.readModel(str(lp))
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print(f"{traffic} Mb/s: HiGHS status {h.modelStatusToString(status)}")
        return False
    milp = h.getInfo().objective_function_value
    exact = solved["objective"]
    rel = abs(milp - exact) / abs(exact)
    ok = rel <= TOLERANCE
    print(f"{traffic} Mb/s: HiGHS {milp!r} exhaustive {exact!r} relative gap {rel:.3e} "
          f"{'ok' if ok else 'MISMATCH'}")
    return ok


def main():
    if len(sys.argv) < 2:
        print(__doc__.strip())
        return 2
    cli = sys.argv[1]
    points = [float(t) for t in sys.argv[2:]] or [300.0, 500.0, 700.0]
    with tempfile.TemporaryDirectory() as workdir:
        results = [check_point(cli, t, workdir) for t in points]
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
