import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_infeasible_points(rng, count, eps_choices=(1e-13, 1e-6), span=10.0):
    """Random 8-vectors outside the admissible set, with their eps."""
    from mhd_idp.limiter import admissible_rows_mask

    out = []
    while len(out) < count:
        batch = rng.uniform(-span, span, size=(count, 8))
        # bias some magnetic fields small so the z ~ 0 branch is exercised
        kill = rng.random(count) < 0.05
        batch[kill, 5:8] = 0.0
        eps = rng.choice(eps_choices, size=count)
        for row, e in zip(batch, eps):
            if not admissible_rows_mask(row[None, :], e)[0]:
                out.append((row, float(e)))
                if len(out) == count:
                    break
    return out
