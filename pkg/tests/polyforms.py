"""Random polynomial forms with their exact exterior derivatives."""
import itertools

import numpy as np

from calibra.exterior import multi_indices, sort_with_sign
from calibra.forms import FormField


def monomials(n, degree):
    return np.array([e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree])


def random_polynomial_form(k, n, degree, rng, scale=1.0):
    """psi = sum_I P_I(x) dx^I with random coefficients in [-scale, scale]; returns (psi, dpsi)."""
    E = monomials(n, degree)
    combos = multi_indices(n, k)
    coef = rng.uniform(-scale, scale, (len(combos), len(E)))

    def fn(p):
        return coef @ np.prod(p[None, :] ** E, axis=1)

    # exact derivative: d(P dx^I) = sum_a dP/dx_a dx^a ^ dx^I, assembled as one matrix on the monomials
    target = {J: i for i, J in enumerate(multi_indices(n, k + 1))} if k < n else {}
    M = np.zeros((len(target), len(E)))
    index = {tuple(e): j for j, e in enumerate(E)}
    for a in range(n):
        for j, e in enumerate(E):
            if e[a] == 0:
                continue
            de = e.copy()
            de[a] -= 1
            col = index[tuple(de)]
            for i, I in enumerate(combos):
                sign, J = sort_with_sign((a + 1,) + I)
                if sign:
                    M[target[J], col] += sign * e[a] * coef[i, j]

    def dfn(p):
        return M @ np.prod(p[None, :] ** E, axis=1)

    psi = FormField(k, n, fn, name="poly")
    dpsi = FormField(k + 1, n, dfn, name="d(poly)") if k < n else None
    return psi, dpsi
