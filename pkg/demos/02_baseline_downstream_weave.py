"""The baseline navigator's downstream failure, reproduced and scored.

Runs the standard PID waypoint navigator down a 200 m leg with a 1.0 m/s
current behind it. Holding ground speed with the current astern leaves
little water flowing over the steering surface, and the frozen calm-water
gains then weave the vehicle back and forth across the line. The same
run in calm water is shown for contrast.
"""

import numpy as np

from asvnav.harness import calm_water_scenario, downstream_failure_scenario, run_scenario
from asvnav.metrics import cross_track_series, sign_changes_over_threshold

for label, scenario in (("calm water", calm_water_scenario()),
                        ("downstream 1.0 m/s", downstream_failure_scenario())):
    result = run_scenario(scenario)
    series = cross_track_series(result.log, list(scenario.mission),
                                scenario.acceptance_radius_m)
    report = result.report
    print(f"=== {label} ({scenario.name}) ===")
    print(f"  completed: {result.completed} in {result.duration_s:.0f} s")
    print(f"  max cross-track error: {report.max_error:.2f} m")
    print(f"  % of path more than 1 m off: {report.pct_over_1m:.1f}%")
    print(f"  line crossings beyond +/-1 m: {sign_changes_over_threshold(series.errors)}")

    # compact profile of the scored leg: one row per ~14 m of progress
    errors = series.errors
    chunks = np.array_split(errors, 14)
    print("  cross-track profile (left  <-  line  ->  right):")
    for chunk in chunks:
        e = float(np.mean(chunk))
        col = int(round(e * 3)) + 20
        col = min(40, max(0, col))
        row = [" "] * 41
        row[20] = "|"
        row[col] = "*"
        print(f"   {e:+6.2f} m  {''.join(row)}")
    print()
