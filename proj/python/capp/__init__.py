"""Static cost analysis and cost-aware scheduling for serverless functions.

Thin convenience layer over the native module: functions returning JSON
strings are re-exported with ``*_json`` decoding helpers.
"""

import json

from _capp import (  # noqa: F401
    capp_canonical,
    check_wellformed,
    export_interchange,
    format_source,
    infer,
    parse_function,
    schedule,
    simulate,
    solve,
    validate_script,
)


def parse_function_dict(source, name=""):
    return json.loads(parse_function(source, name))


def schedule_dict(request, script, fleet, registry, seed=0):
    return json.loads(schedule(request, script, fleet, registry, seed))


def simulate_events(trace, script, fleet, registry, seed=0):
    out = simulate(trace, script, fleet, registry, seed)
    return [json.loads(line) for line in out.splitlines() if line.strip()]
