"""
Pointwise curvature of a metric.

Jets of g (and of an optional 1-form) are compiled once and evaluated at each
sample point; every tensor is then assembled numerically with numpy object
arrays of mpmath numbers. Each quantity is computed twice: with signs
(SIGNED) and with every difference replaced by a sum over absolute values
(MAGNITUDE). The second pass bounds the terms that cancel in the first, which
is the scale the zero-test compares against.

Conventions: dg[i,j,k] = d_k g_ij, ddg[i,j,k,l] = d_l d_k g_ij,
R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb,
R_bd = R^a_bad.
"""

import itertools
import logging
from functools import cached_property

import mpmath
import numpy as np

from expressions.calculus import differentiate
from expressions.evaluation import compile_expressions, geometry_setting, real_value, to_mpf
from expressions.exceptions import DimensionError, DomainViolationError, SingularMetricError
from expressions.symbols import symbol

logger = logging.getLogger(__name__)

#cached points per engine before the memo is cleared
MEMO_SIZE = 64


class Signed:
    magnitude = False

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def neg(a):
        return -a


class Magnitude:
    magnitude = True

    @staticmethod
    def sub(a, b):
        return a + b

    @staticmethod
    def neg(a):
        return a


def object_array(shape, fill=0):
    array = np.empty(shape, dtype=object)
    array.fill(mpmath.mpf(fill))
    return array


def absolute(array):
    return np.vectorize(abs, otypes=[object])(array) if array.shape else np.array(abs(array.item()), dtype=object)


def _multi_indices(n, order):
    for k in range(order + 1):
        yield from itertools.combinations_with_replacement(range(n), k)


class CurvatureEngine:
    """
    Curvature of one metric (and optionally one 1-form nu), memoized per point.

    order is the jet order of g that gets compiled: 2 for curvature, 3 for the
    Cotton tensor.
    """

    def __init__(self, metric, order=2, nu=None):
        self.metric = metric
        self.chart = metric.chart
        self.n = metric.chart.dim
        self.order = order
        self.nu = nu
        self._memo = {}

        coordinates = self.chart.coordinates
        derivatives = {}
        layout, exprs = [], []
        for i in range(self.n):
            for j in range(i, self.n):
                derivatives[(i, j, ())] = metric.matrix[i, j]
                for alpha in _multi_indices(self.n, order):
                    if alpha:
                        derivatives[(i, j, alpha)] = differentiate(derivatives[(i, j, alpha[:-1])],
                                                                   coordinates[alpha[-1]])
                    layout.append(('g', i, j, alpha))
                    exprs.append(derivatives[(i, j, alpha)])
        if nu is not None:
            if nu.chart != self.chart or nu.degree != 1:
                raise DimensionError('nu must be a 1-form on the metric chart')
            for i in range(self.n):
                component = nu.coefficient((i,))
                layout.append(('nu', i, None, ()))
                exprs.append(component)
                for l in range(self.n):
                    layout.append(('nu', i, None, (l,)))
                    exprs.append(differentiate(component, coordinates[l]))

        free = set().union(*(e.free_symbols for e in exprs))
        self.names = tuple(sorted(str(s) for s in free))
        self._layout = layout
        self._function = compile_expressions(tuple(exprs), tuple(symbol(n) for n in self.names))
        logger.debug('compiled %d jet components of %s up to order %d', len(exprs), self.chart.name, order)

    def jets(self, point):
        try:
            raw = self._function(*(to_mpf(point[n]) for n in self.names))
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise DomainViolationError(str(exc)) from exc
        n = self.n
        arrays = {k: object_array((n, n) + (n,) * k) for k in range(self.order + 1)}
        nu, dnu = object_array((n,)), object_array((n, n))
        for (kind, i, j, alpha), value in zip(self._layout, raw):
            value = real_value(value)
            if kind == 'nu':
                if alpha:
                    dnu[i, alpha[0]] = value
                else:
                    nu[i] = value
                continue
            target = arrays[len(alpha)]
            for beta in set(itertools.permutations(alpha)):
                target[(i, j) + beta] = value
                target[(j, i) + beta] = value
        return arrays, nu, dnu

    def at(self, point):
        """(signed, magnitude) curvature stages at a point."""
        key = (mpmath.mp.dps,) + tuple(sorted((str(k), float(v)) for k, v in point.items() if str(k) in self.names))
        if key not in self._memo:
            if len(self._memo) >= MEMO_SIZE:
                self._memo.clear()
            arrays, nu, dnu = self.jets(point)
            signed = PointCurvature(self.n, arrays, nu, dnu, Signed)
            magnitude = PointCurvature(
                self.n, {k: absolute(a) for k, a in arrays.items()}, absolute(nu), absolute(dnu), Magnitude, signed)
            self._memo[key] = (signed, magnitude)
        return self._memo[key]


class PointCurvature:
    """All curvature quantities at one point, computed on demand."""

    def __init__(self, n, arrays, nu, dnu, ops, signed=None):
        self.n = n
        self.ops = ops
        self.signed = signed
        self.g = arrays[0]
        self.dg = arrays.get(1)
        self.ddg = arrays.get(2)
        self.dddg = arrays.get(3)
        self.nu = nu
        self.dnu = dnu
        self.half = mpmath.mpf(1) / 2

    @cached_property
    def ginv(self):
        if self.signed is not None:
            return absolute(self.signed.ginv)
        matrix = mpmath.matrix(self.g.tolist())
        if abs(mpmath.det(matrix)) < geometry_setting('DET_FLOOR'):
            raise SingularMetricError('metric determinant below the floor')
        inverse = mpmath.inverse(matrix)
        return np.array([[inverse[i, j] for j in range(self.n)] for i in range(self.n)], dtype=object)

    @cached_property
    def delta(self):
        delta = object_array((self.n, self.n))
        for i in range(self.n):
            delta[i, i] = mpmath.mpf(1)
        return delta

    @cached_property
    def dginv(self):
        return self.ops.neg(np.einsum('ac,cdl,db->abl', self.ginv, self.dg, self.ginv))

    @cached_property
    def low(self):
        dg, ops = self.dg, self.ops
        return self.half * ops.sub(dg + np.einsum('kji->kij', dg), np.einsum('ijk->kij', dg))

    @cached_property
    def dlow(self):
        ddg, ops = self.ddg, self.ops
        return self.half * ops.sub(ddg + np.einsum('kjil->kijl', ddg), np.einsum('ijkl->kijl', ddg))

    @cached_property
    def christoffel(self):
        return np.einsum('ak,kij->aij', self.ginv, self.low)

    @cached_property
    def dchristoffel(self):
        return np.einsum('akl,kij->aijl', self.dginv, self.low) + np.einsum('ak,kijl->aijl', self.ginv, self.dlow)

    def _riemann(self, gamma, dgamma):
        ops = self.ops
        return ops.sub(
            np.einsum('adbc->abcd', dgamma) + np.einsum('ace,edb->abcd', gamma, gamma),
            np.einsum('acbd->abcd', dgamma) + np.einsum('ade,ecb->abcd', gamma, gamma),
        )

    @cached_property
    def riemann(self):
        return self._riemann(self.christoffel, self.dchristoffel)

    @cached_property
    def riemann_lower(self):
        return np.einsum('ae,ebcd->abcd', self.g, self.riemann)

    @cached_property
    def ricci(self):
        return np.einsum('abad->bd', self.riemann)

    @cached_property
    def scalar(self):
        return sum((self.ginv[i, j] * self.ricci[i, j] for i in range(self.n) for j in range(self.n)),
                   mpmath.mpf(0))

    @cached_property
    def schouten(self):
        n = self.n
        return self.ops.sub(self.ricci, self.g * (self.scalar / (2 * (n - 1)))) / (n - 2)

    @cached_property
    def weyl(self):
        g, P, ops = self.g, self.schouten, self.ops
        kulkarni = ops.sub(
            np.einsum('ac,bd->abcd', g, P) + np.einsum('bd,ac->abcd', g, P),
            np.einsum('ad,bc->abcd', g, P) + np.einsum('bc,ad->abcd', g, P),
        )
        return ops.sub(self.riemann_lower, kulkarni)

    @cached_property
    def weyl_upper(self):
        raised = self.weyl
        for pattern in ('ae,ebcd->abcd', 'be,aecd->abcd', 'ce,abed->abcd', 'de,abce->abcd'):
            raised = np.einsum(pattern, self.ginv, raised)
        return raised

    @cached_property
    def weyl_square(self):
        return np.sum(self.weyl * self.weyl_upper)

    @cached_property
    def einstein(self):
        return self.ops.sub(self.ricci, self.g * (self.scalar / self.n))

    @cached_property
    def covariant_metric(self):
        """nabla_k g_ij, zero for Levi-Civita."""
        gamma, g = self.christoffel, self.g
        return self.ops.sub(self.dg, np.einsum('lki,lj->ijk', gamma, g) + np.einsum('lkj,il->ijk', gamma, g))

    @cached_property
    def bianchi(self):
        R = self.riemann
        return R + np.einsum('acdb->abcd', R) + np.einsum('adbc->abcd', R)

    # third jets, Cotton tensor

    @cached_property
    def ddginv(self):
        ops = self.ops
        return ops.neg(
            np.einsum('acm,cdl,db->ablm', self.dginv, self.dg, self.ginv)
            + np.einsum('ac,cdlm,db->ablm', self.ginv, self.ddg, self.ginv)
            + np.einsum('ac,cdl,dbm->ablm', self.ginv, self.dg, self.dginv)
        )

    @cached_property
    def ddlow(self):
        d3, ops = self.dddg, self.ops
        return self.half * ops.sub(d3 + np.einsum('kjilm->kijlm', d3), np.einsum('ijklm->kijlm', d3))

    @cached_property
    def ddchristoffel(self):
        return (np.einsum('aklm,kij->aijlm', self.ddginv, self.low)
                + np.einsum('akl,kijm->aijlm', self.dginv, self.dlow)
                + np.einsum('akm,kijl->aijlm', self.dginv, self.dlow)
                + np.einsum('ak,kijlm->aijlm', self.ginv, self.ddlow))

    @cached_property
    def driemann(self):
        G, dG, ddG, ops = self.christoffel, self.dchristoffel, self.ddchristoffel, self.ops
        return ops.sub(
            np.einsum('adbcm->abcdm', ddG) + np.einsum('acem,edb->abcdm', dG, G)
            + np.einsum('ace,edbm->abcdm', G, dG),
            np.einsum('acbdm->abcdm', ddG) + np.einsum('adem,ecb->abcdm', dG, G)
            + np.einsum('ade,ecbm->abcdm', G, dG),
        )

    @cached_property
    def cotton(self):
        """C_ijk = nabla_k P_ij - nabla_j P_ik in dimension 3."""
        ops, g, P = self.ops, self.g, self.schouten
        dricci = np.einsum('abadm->bdm', self.driemann)
        dscalar = np.einsum('bdm,bd->m', self.dginv, self.ricci) + np.einsum('bd,bdm->m', self.ginv, dricci)
        dschouten = ops.sub(dricci, (np.einsum('m,ij->ijm', dscalar, g) + self.dg * self.scalar) / 4)
        G = self.christoffel
        nabla = ops.sub(dschouten, np.einsum('lki,lj->ijk', G, P) + np.einsum('lkj,il->ijk', G, P))
        return ops.sub(nabla, np.einsum('ikj->ijk', nabla))

    # Weyl connection built from nu

    @cached_property
    def nu_upper(self):
        return np.einsum('km,m->k', self.ginv, self.nu)

    @cached_property
    def weyl_connection(self):
        delta, nu, ops = self.delta, self.nu, self.ops
        extra = self.half * ops.sub(np.einsum('ki,j->kij', delta, nu) + np.einsum('kj,i->kij', delta, nu),
                                    np.einsum('ij,k->kij', self.g, self.nu_upper))
        return self.christoffel + extra

    @cached_property
    def dweyl_connection(self):
        delta, dnu, ops = self.delta, self.dnu, self.ops
        dnu_upper = np.einsum('kml,m->kl', self.dginv, self.nu) + np.einsum('km,ml->kl', self.ginv, dnu)
        extra = self.half * ops.sub(
            np.einsum('ki,jl->kijl', delta, dnu) + np.einsum('kj,il->kijl', delta, dnu),
            np.einsum('ijl,k->kijl', self.dg, self.nu_upper) + np.einsum('ij,kl->kijl', self.g, dnu_upper),
        )
        return self.dchristoffel + extra

    @cached_property
    def einstein_weyl(self):
        """R_(ij) - R g_ij / 3 of the Weyl connection."""
        riemann = self._riemann(self.weyl_connection, self.dweyl_connection)
        ricci = np.einsum('abad->bd', riemann)
        symmetric = self.half * (ricci + ricci.T)
        scalar = sum((self.ginv[i, j] * symmetric[i, j] for i in range(self.n) for j in range(self.n)),
                     mpmath.mpf(0))
        return self.ops.sub(symmetric, self.g * (scalar / 3))
