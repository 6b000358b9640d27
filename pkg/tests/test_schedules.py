import math

import numpy as np
import pytest

from schedsim import ConfigurationError, ScheduleSpec, ScheduleState, step_schedule
from schedsim.schedules import ScheduleKind, cycle_steps
from schedsim.session import inter_arming_times, run_session
from schedsim.responder import ResponderSpec

DT = 0.005


def walk(spec, responses, seed=0, dt=DT):
    rng = np.random.default_rng(seed)
    state = ScheduleState()
    states, outs = [], []
    for r in responses:
        state, out = step_schedule(state, spec, bool(r), dt, rng)
        states.append(state)
        outs.append(out)
    return states, outs


def test_ri_certain_arming_delivers_and_resets_clock():
    spec = ScheduleSpec.from_cycle("RI", DT, 1.0)
    state = ScheduleState(armed=True, armed_count=1)
    state, out = step_schedule(state, spec, True, DT, np.random.default_rng(0))
    assert out.reinforced
    assert state.clock(DT) == 0
    assert not state.armed
    assert state.delivered_count == 1


def test_dt_must_divide_cycle():
    spec = ScheduleSpec.from_cycle("RI", 0.05, 0.01)
    with pytest.raises(ConfigurationError):
        cycle_steps(spec, 0.003)
    assert cycle_steps(spec, 0.005) == 10


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="RI", T=0.0, p=0.5, x=1.0),
        dict(kind="RI", T=1.0, p=0.0, x=1.0),
        dict(kind="RI", T=1.0, p=1.5, x=1.0),
        dict(kind="XX", T=1.0, p=0.5, x=2.0),
        dict(kind="RR", T=None, p=2.0, x=0.5),
    ],
)
def test_invalid_specs_rejected_at_construction(kwargs):
    with pytest.raises(ConfigurationError):
        ScheduleSpec(**kwargs)


def test_ri_inter_arming_geometric_moments():
    spec = ScheduleSpec.ri(5.0, dt=DT)
    iat = inter_arming_times(spec, 100_000, DT, rng=11)
    # geometric in units of T: mean T/p, sd (T/p) sqrt(1-p)
    mean = spec.T / spec.p
    sd = mean * math.sqrt(1 - spec.p)
    assert abs(iat.mean() - 5.0) / 5.0 <= 0.02
    assert abs(iat.std() - sd) / sd <= 0.02
    assert abs(iat.mean() - mean) <= 4 * sd / math.sqrt(iat.size)


def test_inter_arming_ratio_tends_to_one_as_cycle_shrinks():
    ratios = []
    for T in (1.0, 0.25, 0.05):
        spec = ScheduleSpec.from_cycle("RI", T, T / 5.0)
        iat = inter_arming_times(spec, 50_000, DT, rng=3)
        ratios.append(iat.std() / iat.mean())
    assert ratios[0] < ratios[-1]
    assert abs(ratios[-1] - 1) < 0.02


def test_ri_memoryless_residual_time():
    spec = ScheduleSpec.ri(5.0, dt=DT)
    iat = inter_arming_times(spec, 200_000, DT, rng=5)
    s = 40 * spec.T
    resid = iat[iat > s + 1e-12] - s
    se = iat.std() / math.sqrt(resid.size)
    assert abs(resid.mean() - iat.mean()) < 4 * se


def test_rdrl_every_step_responder_never_reinforced():
    spec = ScheduleSpec.rdrl(2.0, dt=DT)
    rec = run_session(spec, ResponderSpec(60 / DT, DT), duration=600, dt=DT, seed=0)
    assert rec.reinforcers == 0
    assert rec.armings == 0


def test_rr_binomial_delivery_fraction():
    spec = ScheduleSpec.rr(10)
    n = 1_000_000
    rec = run_session(spec, ResponderSpec(60 / DT, DT), duration=n * DT, dt=DT, seed=4)
    assert rec.responses == n
    sigma = math.sqrt(n * 0.1 * 0.9)
    assert abs(rec.reinforcers - 0.1 * n) <= 3 * sigma


def test_delivered_never_exceeds_armed():
    rng = np.random.default_rng(9)
    for kind in ("RI", "RDRL"):
        spec = ScheduleSpec.from_cycle(kind, 0.02, 0.3)
        states, _ = walk(spec, rng.random(20_000) < 0.05, seed=2)
        assert all(s.delivered_count <= s.armed_count for s in states)
        assert all(s.clock_steps < 4 for s in states)


def test_reinforcement_requires_response_except_rt():
    rng = np.random.default_rng(1)
    responses = rng.random(20_000) < 0.02
    for kind in ("RI", "RDRL"):
        spec = ScheduleSpec.from_cycle(kind, 0.02, 0.3)
        _, outs = walk(spec, responses, seed=3)
        assert all(r for r, o in zip(responses, outs) if o.reinforced)
    rt = ScheduleSpec.from_cycle("RT", 0.02, 0.3)
    _, outs = walk(rt, np.zeros(5000, bool), seed=3)
    assert sum(o.reinforced for o in outs) > 0


def test_ri_arming_events_bounded_by_cycles():
    spec = ScheduleSpec.from_cycle("RI", 0.05, 0.5)
    n = 20_000
    states, _ = walk(spec, np.ones(n, bool), seed=8)
    assert states[-1].armed_count <= n * DT / 0.05


def _first_arming(spec, seed, n=5000):
    rng = np.random.default_rng(seed)
    state = ScheduleState()
    for k in range(n):
        state, out = step_schedule(state, spec, False, DT, rng)
        if out.armed_this_step:
            return k
    return None


@pytest.mark.parametrize("seed", range(20))
def test_no_responses_ri_rt_and_rearming_rdrl_share_arming_law(seed):
    ri = ScheduleSpec.from_cycle("RI", 0.01, 0.05)
    rt = ScheduleSpec.from_cycle("RT", 0.01, 0.05)
    rdrl = ScheduleSpec.from_cycle("RDRL", 0.01, 0.05, rdrl_rearm=True)
    k = _first_arming(ri, seed)
    assert k == _first_arming(rt, seed) == _first_arming(rdrl, seed)


def test_no_responses_ri_and_rdrl_deliver_nothing():
    for kind in ("RI", "RDRL"):
        spec = ScheduleSpec.from_cycle(kind, 0.01, 0.2)
        states, _ = walk(spec, np.zeros(3000, bool), seed=1)
        assert states[-1].delivered_count == 0


def test_rdrl_single_attempt_per_pause():
    spec = ScheduleSpec.from_cycle("RDRL", 0.01, 0.5)
    # one long pause: at most one arming attempt, so at most one arming
    for seed in range(30):
        states, _ = walk(spec, np.zeros(2000, bool), seed=seed)
        assert states[-1].armed_count <= 1
        assert states[-1].attempted


def test_rdrl_response_on_boundary_step_cancels_cycle():
    spec = ScheduleSpec.from_cycle("RDRL", 0.02, 1.0)  # 4 steps per cycle
    # response on the 4th step: the cycle would have completed there
    states, outs = walk(spec, [False, False, False, True, False, False, False, False])
    assert states[3].clock_steps == 0 and states[3].armed_count == 0
    assert states[7].armed_count == 1  # 4 silent steps after the response
    # a response right after arming is reinforced
    states, outs = walk(spec, [False] * 4 + [True])
    assert outs[4].reinforced


def test_rdrl_rate_bounded_by_size():
    spec = ScheduleSpec.rdrl(4.0, dt=DT)
    for B in (5, 15, 30, 60, 150):
        rec = run_session(spec, ResponderSpec(B, DT), duration=3600, dt=DT, seed=B)
        # 60/x ceiling plus 3 sigma of Poisson noise
        assert rec.reinforcement_rate <= 15 + 3 * math.sqrt(15 * 60) / 60


def test_rt_ignores_responses():
    spec = ScheduleSpec.from_cycle("RT", 0.05, 0.1)
    _, a = walk(spec, np.zeros(4000, bool), seed=6)
    _, b = walk(spec, np.ones(4000, bool), seed=6)
    assert [o.reinforced for o in a] == [o.reinforced for o in b]


def test_determinism_same_seed_same_trajectory():
    rng = np.random.default_rng(0)
    responses = rng.random(5000) < 0.05
    for kind in ("RI", "RDRL", "RT"):
        spec = ScheduleSpec.from_cycle(kind, 0.05, 0.2)
        assert walk(spec, responses, seed=12)[0] == walk(spec, responses, seed=12)[0]


def test_rdrl_constructor_rounds_cycle_to_steps():
    spec = ScheduleSpec.rdrl(8.0, dt=DT)
    assert spec.T == pytest.approx(2.0)
    assert spec.p == pytest.approx(0.25)
    assert spec.kind is ScheduleKind.RDRL
    odd = ScheduleSpec.rdrl(7.0, dt=DT)
    assert cycle_steps(odd, DT) == 350
    assert odd.T / odd.p == pytest.approx(7.0)
