"""Tests for the rate-energy boundary solver and its supporting pieces."""

import numpy as np
import pytest

from swiptifc import (
    ChannelSet,
    DualInfeasibleError,
    InfeasibleTargetError,
    InvalidInputError,
    InvariantViolationError,
    P3Problem,
    REBoundary,
    REPoint,
    achievable_rate,
    draw_channel_set,
    emax,
    channel_digest,
    inner_max,
    lemma1_transform,
    re_boundary_point,
    re_sweep,
    solve_p3,
    time_sharing_curve,
    waterfill,
)

ALPHA = np.array([[1.0, 0.8], [0.8, 1.0]])


def _cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _toy_cs():
    """Hand-built 2x2 set with h11 = diag(2, 1) and identity other links."""
    eye = np.eye(2, dtype=complex)
    return ChannelSet(
        h11=np.diag([2.0, 1.0]).astype(complex),
        h12=eye.copy(),
        h21=eye.copy(),
        h22=eye.copy(),
        alpha=np.array([[2.5, 1.0], [1.0, 1.0]]),
        m_t=2,
        m_r=2,
    )


def _scalar_cs():
    one = np.array([[1.0]], dtype=complex)
    return ChannelSet(
        h11=one.copy(),
        h12=one.copy(),
        h21=one.copy(),
        h22=one.copy(),
        alpha=np.ones((2, 2)),
        m_t=1,
        m_r=1,
    )


class TestInnerMax:
    def test_balanced_price_gives_zero(self):
        # unit modes priced at exactly their inverse gain: nothing to fill
        q = inner_max(np.eye(2, dtype=complex), np.eye(2, dtype=complex))
        assert np.allclose(q.q, 0.0, atol=1e-12)

    def test_cheap_price_fills_uniformly(self):
        q = inner_max(0.25 * np.eye(2, dtype=complex), np.eye(2, dtype=complex))
        assert np.allclose(q.q, 3.0 * np.eye(2), atol=1e-9)

    def test_scalar_formula(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            a = float(rng.uniform(0.05, 5.0))
            h = float(rng.uniform(0.1, 3.0))
            q = inner_max(np.array([[a]], dtype=complex), np.array([[h]], dtype=complex))
            want = max(1.0 / a - 1.0 / h**2, 0.0)
            assert q.q[0, 0].real == pytest.approx(want, abs=1e-9)

    def test_non_pd_price_raises(self):
        with pytest.raises(DualInfeasibleError):
            inner_max(np.diag([1.0, -0.1]).astype(complex), np.eye(2, dtype=complex))


class TestEmax:
    def test_scalar_all_ones(self):
        cs = _scalar_cs()
        for strategy in ("meb", "mlb", "sler", "slnr"):
            assert emax(cs, strategy, 3.0) == pytest.approx(6.0, rel=1e-9)

    def test_toy_meb(self):
        assert emax(_toy_cs(), "meb", 1.0) == pytest.approx(5.0, rel=1e-9)

    def test_mlb_below_meb_census(self):
        for seed in range(1000):
            cs = draw_channel_set(2, 2, ALPHA, seed=seed)
            lo = emax(cs, "mlb", 4.0)
            hi = emax(cs, "meb", 4.0)
            assert lo <= hi * (1.0 + 1e-9)

    def test_unknown_strategy(self):
        with pytest.raises(InvalidInputError):
            emax(_toy_cs(), "mrt", 1.0)


class TestSolveP3:
    def _links(self, seed, m=3):
        cs = draw_channel_set(m, m, ALPHA, seed=seed)
        return cs.h22, cs.h12

    def test_zero_target_is_waterfilling(self):
        h22t, h12 = self._links(31)
        p = 4.0
        q, diag = solve_p3(h22t, h12, 0.0, p)
        assert diag.branch == "WF"
        assert np.allclose(q.q, waterfill(h22t, None, p).q, atol=1e-8)

    def test_cap_target_is_energy_beam(self):
        h22t, h12 = self._links(32)
        p = 4.0
        _, s, v = np.linalg.svd(h12)
        cap = p * s[0] ** 2
        q, diag = solve_p3(h22t, h12, cap, p)
        beam = p * np.outer(v.conj().T[:, 0], v.conj().T[:, 0].conj())
        assert np.linalg.norm(q.q - beam) / p < 1e-4
        assert diag.branch == "DUAL"
        assert diag.lam is None and diag.mu is None

    def test_above_cap_raises_with_bound(self):
        h22t, h12 = self._links(33)
        p = 2.0
        cap = p * np.linalg.svd(h12, compute_uv=False)[0] ** 2
        with pytest.raises(InfeasibleTargetError) as exc:
            solve_p3(h22t, h12, 1.5 * cap, p)
        assert exc.value.max_attainable == pytest.approx(cap, rel=1e-9)

    def test_energy_met_and_budget_respected(self):
        for seed in range(20):
            h22t, h12 = self._links(100 + seed)
            p = 5.0
            cap = p * np.linalg.svd(h12, compute_uv=False)[0] ** 2
            for frac in (0.2, 0.5, 0.8, 0.99):
                q, diag = solve_p3(h22t, h12, frac * cap, p)
                e = float(np.trace(h12 @ q.q @ h12.conj().T).real)
                assert e >= frac * cap * (1.0 - 1e-8)
                assert q.trace <= p * (1.0 + 1e-9)

    def test_beats_mixture_family(self):
        # convex mixes of water-filling and the energy beam are all feasible
        # once they meet the floor; the solver must do at least as well
        for seed in range(10):
            h22t, h12 = self._links(200 + seed)
            p = 3.0
            prob_cap = p * np.linalg.svd(h12, compute_uv=False)[0] ** 2
            e_req = 0.6 * prob_cap
            q, diag = solve_p3(h22t, h12, e_req, p)
            prob = P3Problem(h22t, h12, e_target=e_req, p=p)
            q_wf = waterfill(h22t, None, p).q
            _, _, v = np.linalg.svd(h12)
            beam = p * np.outer(v.conj().T[:, 0], v.conj().T[:, 0].conj())
            best = -np.inf
            for tau in np.linspace(0.0, 1.0, 41):
                cand = tau * beam + (1.0 - tau) * q_wf
                if bool(prob.feasible(cand[None])[0]):
                    best = max(best, float(prob.objective(cand[None])[0]))
            got = float(prob.objective(q.q[None])[0])
            assert got >= best - 1e-6

    def test_beats_random_feasible_search(self):
        h22t, h12 = self._links(41)
        p = 2.0
        cap = p * np.linalg.svd(h12, compute_uv=False)[0] ** 2
        e_req = 0.5 * cap
        q, _ = solve_p3(h22t, h12, e_req, p)
        prob = P3Problem(h22t, h12, e_target=e_req, p=p)
        rng = np.random.default_rng(7)
        best = -np.inf
        for _ in range(40):
            a = _cgauss(rng, 3, 3)
            cand = a @ a.conj().T
            cand *= p / np.trace(cand).real
            if bool(prob.feasible(cand[None])[0]):
                best = max(best, float(prob.objective(cand[None])[0]))
        got = float(prob.objective(q.q[None])[0])
        assert got >= best - 1e-3

    def test_weak_duality(self):
        # primal value never exceeds the Lagrange dual at the solver's
        # reported multipliers
        for seed in range(10):
            h22t, h12 = self._links(300 + seed)
            p = 4.0
            cap = p * np.linalg.svd(h12, compute_uv=False)[0] ** 2
            e_req = 0.7 * cap
            q, diag = solve_p3(h22t, h12, e_req, p)
            if diag.lam is None:
                continue
            g = h12.conj().T @ h12
            a = diag.mu * np.eye(3) - diag.lam * g
            q_in = inner_max(a, h22t)
            prob = P3Problem(h22t, h12, e_target=e_req, p=p)
            inner_val = float(prob.objective(q_in.q[None])[0]) - float(
                np.trace(a @ q_in.q).real
            )
            dual = inner_val + diag.mu * p - diag.lam * e_req
            primal = float(prob.objective(q.q[None])[0])
            assert primal <= dual + 1e-5

    def test_subgradient_is_feasible_not_better(self):
        h22t, h12 = self._links(42)
        p = 5.0
        cap = p * np.linalg.svd(h12, compute_uv=False)[0] ** 2
        e_req = 0.6 * cap
        qb, db = solve_p3(h22t, h12, e_req, p)
        qs, ds = solve_p3(h22t, h12, e_req, p, method="subgradient")
        assert ds.method == "subgradient"
        prob = P3Problem(h22t, h12, e_target=e_req, p=p)
        assert bool(prob.feasible(qs.q[None])[0])
        assert ds.rate_bits <= db.rate_bits + 1e-3

    def test_unknown_method(self):
        h22t, h12 = self._links(43)
        with pytest.raises(InvalidInputError):
            solve_p3(h22t, h12, 0.1, 1.0, method="newton")


class TestReBoundaryPoint:
    def test_zero_target_turns_transmitter_off(self):
        cs = draw_channel_set(3, 3, ALPHA, seed=51)
        p = 5.0
        pt = re_boundary_point(cs, "meb", 0.0, p)
        assert pt.branch == "NO_TX"
        assert pt.p1 == 0.0
        want = achievable_rate(cs.h22, np.eye(3), waterfill(cs.h22, None, p))
        assert pt.rate_bits == pytest.approx(want, rel=1e-9)

    def test_max_target_runs_full_power(self):
        cs = draw_channel_set(3, 3, ALPHA, seed=52)
        p = 5.0
        top = emax(cs, "meb", p)
        pt = re_boundary_point(cs, "meb", top, p)
        assert pt.p1 == pytest.approx(p, rel=1e-6)
        assert pt.energy == pytest.approx(top, rel=1e-6)

    def test_energy_delivered_at_interior_targets(self):
        cs = draw_channel_set(2, 2, ALPHA, seed=53)
        p = 4.0
        top = emax(cs, "mlb", p)
        for frac in (0.3, 0.6, 0.9):
            pt = re_boundary_point(cs, "mlb", frac * top, p)
            assert pt.energy >= frac * top * (1.0 - 1e-8)


class TestReSweep:
    def test_endpoint_grid(self):
        cs = draw_channel_set(2, 2, ALPHA, seed=61)
        p = 3.0
        top = emax(cs, "meb", p)
        bd = re_sweep(cs, "meb", p, e_grid=[0.0, top])
        assert len(bd.points) == 2
        assert bd.points[0].e_bar == 0.0
        assert bd.points[-1].e_bar == pytest.approx(top)
        assert bd.strategy == "meb"
        assert bd.channel_digest == channel_digest(cs)

    def test_rate_monotone_and_energy_feasible(self):
        cs = draw_channel_set(3, 3, ALPHA, seed=62)
        bd = re_sweep(cs, "meb", 5.0, n_points=16)
        rates = [pt.rate_bits for pt in bd.points]
        for a, b in zip(rates, rates[1:]):
            assert b <= a * (1.0 + 1e-9) + 1e-9
        for pt in bd.points:
            assert pt.energy >= pt.e_bar - 1e-6 * max(1.0, pt.e_bar)

    def test_unreachable_grid_point_becomes_gap(self):
        cs = draw_channel_set(2, 2, ALPHA, seed=63)
        p = 2.0
        top = emax(cs, "meb", p)
        bd = re_sweep(cs, "meb", p, e_grid=[0.0, top, 2.0 * top])
        assert len(bd.points) == 2
        assert len(bd.gaps) == 1
        idx, e_bar, msg = bd.gaps[0]
        assert idx == 2
        assert e_bar == pytest.approx(2.0 * top)
        assert msg

    def test_all_strategies_produce_valid_curves(self):
        cs = draw_channel_set(2, 2, ALPHA, seed=64)
        for strategy in ("meb", "mlb", "sler", "slnr", "meb_rank2"):
            bd = re_sweep(cs, strategy, 2.0, n_points=8)
            bd.validate()
            assert len(bd.points) == 8


class TestBoundaryValidate:
    def _points(self):
        return [
            REPoint(e_bar=0.0, rate_bits=2.0, energy=0.5, p1=0.0, branch="WF", iterations=1),
            REPoint(e_bar=1.0, rate_bits=1.5, energy=1.0, p1=1.0, branch="DUAL", iterations=3),
        ]

    def test_accepts_clean_curve(self):
        bd = REBoundary(points=self._points(), strategy="meb", channel_digest="d", e_max=1.0)
        bd.validate()

    def test_rejects_rate_increase(self):
        pts = self._points()
        pts[1] = REPoint(
            e_bar=1.0, rate_bits=2.5, energy=1.0, p1=1.0, branch="DUAL", iterations=3
        )
        bd = REBoundary(points=pts, strategy="meb", channel_digest="d", e_max=1.0)
        with pytest.raises(InvariantViolationError):
            bd.validate()

    def test_rejects_energy_shortfall(self):
        pts = self._points()
        pts[1] = REPoint(
            e_bar=1.0, rate_bits=1.5, energy=0.2, p1=1.0, branch="DUAL", iterations=3
        )
        bd = REBoundary(points=pts, strategy="meb", channel_digest="d", e_max=1.0)
        with pytest.raises(InvariantViolationError):
            bd.validate()

    def test_rejects_unordered_targets(self):
        pts = list(reversed(self._points()))
        bd = REBoundary(points=pts, strategy="meb", channel_digest="d", e_max=1.0)
        with pytest.raises(InvariantViolationError):
            bd.validate()


class TestTimeSharing:
    def test_endpoints(self):
        cs = draw_channel_set(3, 3, ALPHA, seed=71)
        p = 4.0
        bd = time_sharing_curve(cs, "meb", p, weights=[0.0, 0.5, 1.0])
        first, last = bd.points[0], bd.points[-1]
        # tau = 0: transmitter 1 silent, water-filling rate, leakage energy
        q_wf = waterfill(cs.h22, None, p)
        assert first.rate_bits == pytest.approx(
            achievable_rate(cs.h22, np.eye(3), q_wf), rel=1e-9
        )
        assert first.p1 == 0.0
        # tau = 1: full-power beams at both transmitters
        assert last.p1 == pytest.approx(p)
        assert last.e_bar == pytest.approx(bd.e_max)
        assert all(pt.branch == "TS" for pt in bd.points)

    def test_linear_interpolation(self):
        cs = draw_channel_set(2, 2, ALPHA, seed=72)
        bd = time_sharing_curve(cs, "mlb", 2.0, weights=np.linspace(0.0, 1.0, 5))
        r0, r1 = bd.points[0].rate_bits, bd.points[-1].rate_bits
        e0, e1 = bd.points[0].energy, bd.points[-1].energy
        for pt in bd.points:
            tau = pt.p1 / 2.0
            assert pt.rate_bits == pytest.approx((1 - tau) * r0 + tau * r1, rel=1e-9)
            assert pt.energy == pytest.approx((1 - tau) * e0 + tau * e1, rel=1e-9)

    def test_rejects_adaptive_strategies(self):
        cs = draw_channel_set(2, 2, ALPHA, seed=73)
        with pytest.raises(InvalidInputError):
            time_sharing_curve(cs, "sler", 1.0)


class TestLemma1:
    def test_identity_links(self):
        res = lemma1_transform(np.eye(3, dtype=complex), np.eye(3, dtype=complex))
        assert res.residual_own < 1e-10
        assert res.residual_cross < 1e-10
        assert np.allclose(res.sigma_g, 1.0)

    def test_random_square(self):
        rng = np.random.default_rng(81)
        for _ in range(20):
            h_own = _cgauss(rng, 3, 3)
            h_cross = _cgauss(rng, 3, 3)
            res = lemma1_transform(h_own, h_cross)
            assert res.residual_own < 1e-8
            assert res.residual_cross < 1e-8
            assert np.all(np.diff(res.sigma_g) <= 1e-12)
            # reconstruction through the reported factors
            d_a = res.u_g.conj().T @ h_own @ res.t
            d_b = res.v_g.conj().T @ h_cross @ res.t
            assert np.linalg.norm(d_a - np.diag(np.diag(d_a))) < 1e-8
            assert np.linalg.norm(d_b - np.diag(np.diag(d_b))) < 1e-8

    def test_tall_links(self):
        rng = np.random.default_rng(82)
        res = lemma1_transform(_cgauss(rng, 4, 3), _cgauss(rng, 4, 3))
        assert res.residual_own < 1e-8
        assert res.residual_cross < 1e-8
        # receive-side bases are completed to full unitaries
        assert res.u_g.shape == (4, 4)
        assert res.v_g.shape == (4, 4)
        assert np.allclose(res.v_g.conj().T @ res.v_g, np.eye(4), atol=1e-10)
        assert res.t.shape == (3, 3)
        assert res.sigma_g.shape == (3,)

    def test_wide_links_rejected(self):
        rng = np.random.default_rng(83)
        with pytest.raises(InvalidInputError):
            lemma1_transform(_cgauss(rng, 2, 3), _cgauss(rng, 2, 3))
