"""Time-step latency model for decode schedules.

Costs follow the unlimited-parallelism accounting: LLR transforms cost
one step regardless of width, partial-sum combination is free, and each
pruned node has a fixed step price.  A schedule's latency is the sum of
its step costs; reports compare merger configurations against the first
entry as the baseline.
"""

import json

from .schedule import MergerConfig, build_schedule

_DEFAULT_COSTS = {
    "F": 1,
    "G": 1,
    "COMBINE": 0,
    "R0": 1,
    "R1": 1,
    "REP": 2,
    "SPC": 3,
    "REP-SPC": 4,
    "R0tSPC": 4,
    "R0t1REPSPC": 4,
    "REPtSPC": 9,
    "REPtR1": 8,
    "REPSPCt": 7,
    "REPSPCR1t1": 7,
    "REPR1t": 7,
    "GENERIC": 1,
}


def default_cost_model():
    """Per-step costs in time steps; returns a fresh dict."""
    return dict(_DEFAULT_COSTS)


def load_cost_model(path):
    """Read a cost model from a JSON object file; values must be numbers."""
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("cost model must be a JSON object")
    model = default_cost_model()
    for key, val in raw.items():
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ValueError(f"cost for {key!r} is not a number: {val!r}")
        model[key] = val
    return model


def schedule_latency(sched, cost_model=None):
    """Total time steps to execute a schedule.

    Parameters
    ----------
    sched : DecodeSchedule
    cost_model : dict, optional
        Maps op names (F, G, COMBINE) and node kinds to step costs;
        defaults to ``default_cost_model()``.
    """
    model = _DEFAULT_COSTS if cost_model is None else cost_model
    total = 0
    for step in sched.steps:
        key = step.kind if step.op == "NODE" else step.op
        if key not in model:
            raise ValueError(f"cost model has no entry for {key!r}")
        total += model[key]
    return total


def latency_report(code, configs, cost_model=None):
    """Latency of several merger configurations on one code.

    The first configuration is the baseline for reduction percentages.

    Parameters
    ----------
    code : CodeSpec
    configs : sequence
        Merger selections: bundle names, tag iterables, or MergerConfig.

    Returns
    -------
    dict
        {"N", "K", "construction", "rows"}; each row holds config,
        mergers, steps, and reduction_pct (0 for the baseline row).
    """
    if not configs:
        raise ValueError("need at least one configuration")
    rows = []
    base = None
    for cfg in configs:
        if not isinstance(cfg, MergerConfig):
            cfg = MergerConfig(cfg)
        sched = build_schedule(code, cfg)
        steps = schedule_latency(sched, cost_model)
        if base is None:
            base = steps
        red = 0 if base == 0 else round(100.0 * (base - steps) / base)
        rows.append(
            {
                "config": cfg.name,
                "mergers": sorted(sched.enabled),
                "steps": steps,
                "reduction_pct": int(red),
            }
        )
    return {
        "N": code.N,
        "K": code.K,
        "construction": code.construction,
        "rows": rows,
    }


def render_latency_table(report):
    """Fixed-width text table for a latency report; baseline shows '-'."""
    head = ["config", "steps", "reduction"]
    body = []
    for i, row in enumerate(report["rows"]):
        red = "-" if i == 0 else f"{row['reduction_pct']}%"
        body.append([row["config"], str(row["steps"]), red])
    widths = [max(len(head[c]), *(len(r[c]) for r in body)) for c in range(3)]
    lines = [f"polar({report['N']},{report['K']}) [{report['construction']}]"]
    lines.append("  ".join(h.ljust(widths[c]) for c, h in enumerate(head)))
    lines.append("  ".join("-" * widths[c] for c in range(3)))
    for r in body:
        lines.append("  ".join(r[c].ljust(widths[c]) for c in range(3)))
    return "\n".join(lines)
