import random

import pytest

from qreflect.representations import make_params
from qreflect.scalars import ScalarContext


@pytest.fixture
def ctx():
    return ScalarContext()


@pytest.fixture
def nctx():
    return ScalarContext(backend="numeric", q_value=1.4 + 0.3j)


def rand_rational(rng, nonzero=True):
    num = rng.randint(1, 20)
    den = rng.randint(1, 20)
    sign = rng.choice((1, -1))
    if not nonzero and rng.random() < 0.25:
        return "0"
    return f"{sign * num}/{den}"


def rand_params(ctx, rng, k_plus_zero=False, k_minus_zero=False,
                need_k=False, s_range=(-1, 0, 1, 2)):
    """Admissible random boundary parameters (avoids the eps+ = -eps- pole)."""
    while True:
        ep = rand_rational(rng)
        em = rand_rational(rng)
        from qreflect.scalars import rational

        if rational(ep) + rational(em) == 0:
            continue
        kp = "0" if k_plus_zero else rand_rational(rng, nonzero=need_k)
        km = "0" if k_minus_zero else rand_rational(rng, nonzero=need_k)
        s0 = rng.choice(s_range)
        s1 = rng.choice(s_range)
        pt = rand_rational(rng, nonzero=False)
        return make_params(ctx, ep, em, kp, km, s0, s1, pt)


def seeded(seed):
    return random.Random(seed)
