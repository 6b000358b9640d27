"""Compiled session loops.

Transition rules and the order of random draws mirror
:func:`schedsim.responder.step_responder` followed by
:func:`schedsim.schedules.step_schedule`; ``tests/test_kernel.py`` checks the
two routes step for step.
"""

import numba
import numpy as np

RI, RDRL, RT, RR = 0, 1, 2, 3


@numba.njit(nogil=True, cache=True)
def run_session_kernel(kind, cycle, p, rearm, bursty, p_run, p_break, p_resp, n_steps, rng):
    """Return (responses, armings, deliveries) for one session of ``n_steps`` steps."""
    clock = 0
    armed = False
    attempted = False
    running = not bursty
    n_resp = 0
    n_armed = 0
    n_deliv = 0
    for _ in range(n_steps):
        # responder
        if bursty:
            u = rng.random()
            if running:
                if u < p_break:
                    running = False
            elif u < p_run:
                running = True
            response = running and rng.random() < p_resp
        else:
            response = rng.random() < p_resp
        if response:
            n_resp += 1

        # schedule
        if kind == RI:
            clock += 1
            if clock == cycle:
                clock = 0
                if not armed and rng.random() < p:
                    armed = True
                    n_armed += 1
            if response and armed:
                armed = False
                n_deliv += 1
                clock = 0
        elif kind == RDRL:
            if response:
                if armed:
                    armed = False
                    n_deliv += 1
                clock = 0
                attempted = False
            elif rearm or not attempted:
                clock += 1
                if clock == cycle:
                    clock = 0
                    attempted = True
                    if not armed and rng.random() < p:
                        armed = True
                        n_armed += 1
        elif kind == RT:
            clock += 1
            if clock == cycle:
                clock = 0
                if rng.random() < p:
                    n_armed += 1
                    n_deliv += 1
        else:
            if response and rng.random() < p:
                n_armed += 1
                n_deliv += 1
    return n_resp, n_armed, n_deliv


@numba.njit(nogil=True, cache=True)
def arming_intervals_kernel(cycle, p, n_events, rng):
    """Inter-arming times, in steps, for RI or RT driven by a response on every step.

    With a response every step an RI reinforcer is collected on the step it is
    armed, so successive armings are separated by pure cycle/arming waits.
    """
    out = np.empty(n_events, dtype=np.int64)
    clock = 0
    last = 0
    step = 0
    k = 0
    while k < n_events:
        step += 1
        clock += 1
        if clock == cycle:
            clock = 0
            if rng.random() < p:
                out[k] = step - last
                last = step
                k += 1
                # RI delivery on the same step restarts the clock; already at 0
    return out
