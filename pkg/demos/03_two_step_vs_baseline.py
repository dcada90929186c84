"""Head-to-head: iterative two-step matching against a one-shot baseline.

Four commuter flows cross a 6x6 grid corner to corner with far fewer
cabs than requests.  The baseline solves a single request-to-vehicle
assignment per 30 s update, so each cab gains at most one new rider per
update.  The two-step matcher re-runs that assignment until it stops
finding matches and then lets freshly assigned cabs hand their riders
to busier compatible cabs, so one cab can leave an update with several
new riders while the rest stay available.
"""

from ridematch import commuter_config, compute_metrics, run_scenario

SEEDS = range(5)


def report(matcher, seed):
    result = run_scenario(commuter_config(seed=seed, matcher=matcher))
    return compute_metrics(result.trip_records, result.state.vehicles,
                           result.update_records)


print(f"{'seed':>4}  {'service rate %':>22}  {'assignments/vehicle':>22}")
print(f"{'':>4}  {'two-step':>10} {'baseline':>10}  {'two-step':>10} "
      f"{'baseline':>10}")
sums = [0.0, 0.0, 0.0, 0.0]
for seed in SEEDS:
    two = report("gmomatch", seed)
    base = report("baseline", seed)
    row = (two.service_rate, base.service_rate,
           two.avg_assignments, base.avg_assignments)
    sums = [s + v for s, v in zip(sums, row)]
    print(f"{seed:>4}  {row[0]:>10.1f} {row[1]:>10.1f}  "
          f"{row[2]:>10.2f} {row[3]:>10.2f}")

n = len(SEEDS)
print(f"{'mean':>4}  {sums[0] / n:>10.1f} {sums[1] / n:>10.1f}  "
      f"{sums[2] / n:>10.2f} {sums[3] / n:>10.2f}")
print("\nSame seeds, same demand, same fleet; the only difference is the")
print("matcher. The gap closes if vehicles are plentiful or windows are")
print("loose, because then a single assignment round already keeps every")
print("cab busy.")
