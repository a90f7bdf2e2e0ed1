from fractions import Fraction

import pytest

from helpers import all_contents, oracle_cached, seeded_params, shared_params
from tpushtasep.chain import (
    Content,
    OrderMap,
    StateSpaceLimitError,
    SystemParams,
    averaged_kernel_check,
    bell_outcomes,
    bell_outcomes_at,
    enumerate_states,
    generator,
    interval_merge_maps,
    project_config,
    projection_check,
    stationary_oracle,
)
from tpushtasep.ratfunc import IntPoly, RatFunc, t_analogue
from tpushtasep.xpoly import elementary_eval

F = Fraction


class TestContent:
    def test_from_word(self):
        c = Content.from_word((2, 4, 3, 0, 2, 4, 1, 3))
        assert c.multiplicities == (1, 1, 2, 2, 2)
        assert c.n == 8 and c.s == 4
        assert c.a(3) == 4  # two 3s and two 4s

    def test_partition_and_conjugate(self):
        c = Content((1, 1, 1))
        assert c.partition() == (2, 1, 0)
        assert c.conjugate() == (2, 1)

    def test_counts(self):
        assert Content((2, 2, 1)).state_count() == 30  # 5!/(2!2!1!)
        assert Content((1, 2)).state_count() == 3

    def test_invalid(self):
        with pytest.raises(ValueError):
            Content((1, 0))  # trailing zero species
        with pytest.raises(ValueError):
            Content((1, -1, 1))

    def test_vacancy_requirement(self):
        Content((0, 2, 1)).require_vacancy  # construction is fine
        with pytest.raises(ValueError):
            Content((0, 2, 1)).require_vacancy()


class TestEnumerateStates:
    def test_order_210(self):
        states = enumerate_states(Content((1, 1, 1)))
        assert states == [
            (2, 1, 0),
            (2, 0, 1),
            (1, 2, 0),
            (1, 0, 2),
            (0, 2, 1),
            (0, 1, 2),
        ]

    def test_counts(self):
        assert len(enumerate_states(Content((1, 2)))) == 3
        assert len(enumerate_states(Content((2, 2, 1)))) == 30

    def test_strictly_decreasing_lex(self):
        states = enumerate_states(Content((2, 1, 1)))
        assert all(a > b for a, b in zip(states, states[1:]))


class TestBellOutcomes:
    ETA = (2, 4, 3, 0, 2, 4, 1, 3)

    def test_reference_transition_table(self):
        # bell at site 3: six outcomes with the tabulated cascade weights
        t = RatFunc.t()
        den4 = RatFunc(1, t_analogue(4))
        den42 = RatFunc(1, t_analogue(4) * t_analogue(2))
        expected = {
            (2, 4, 0, 3, 2, 4, 1, 3): den4,
            (2, 4, 0, 1, 3, 4, 2, 3): t * den42,
            (2, 4, 0, 2, 3, 4, 1, 3): t * t * den42,
            (2, 4, 0, 1, 2, 4, 3, 3): t * t * den4,
            (3, 4, 0, 2, 2, 4, 1, 3): t ** 3 * den42,
            (3, 4, 0, 1, 2, 4, 2, 3): t ** 4 * den42,
        }
        assert dict(bell_outcomes(self.ETA, 3)) == expected

    def test_vacant_site_is_inert(self):
        assert bell_outcomes((0, 1), 1) == [((0, 1), RatFunc(1))]

    def test_probabilities_sum_to_one(self):
        for content in all_contents(4):
            for eta in enumerate_states(content):
                for j in range(1, 5):
                    total = sum(
                        (p for _, p in bell_outcomes(eta, j)), RatFunc(0)
                    )
                    assert total == RatFunc(1), (eta, j)

    def test_rate_characterisation(self):
        # cross-check the cascade construction against the per-species
        # factorisation: w(h) = t^l / [K_h]_t with l counted in the source
        # configuration on the open travel arc
        eta = self.ETA
        content = Content.from_word(eta)
        n = len(eta)
        for target, prob in bell_outcomes(eta, 3):
            w = RatFunc(1)
            for h in range(1, content.s + 1):
                src = [i for i in range(n) if eta[i] == h and target[i] != h]
                dst = [i for i in range(n) if target[i] == h and eta[i] != h]
                if not src:
                    continue
                K = sum(1 for v in content.partition() if v < h)
                (j_h,), (j_h2,) = src, dst
                ell = sum(
                    1
                    for d in range(1, (j_h2 - j_h) % n)
                    if eta[(j_h + d) % n] < h
                )
                w = w * RatFunc(IntPoly(1).shift(ell), t_analogue(K))
            assert w == prob, target


class TestGenerator:
    def test_single_particle_rate(self):
        params = SystemParams((F(3), F(5)), F(1, 2))
        table = generator(Content((1, 1)), params)
        assert table.rate((1, 0), (0, 1)) == F(1, 3)
        assert table.rate((0, 1), (1, 0)) == F(1, 5)

    def test_rows_sum_to_zero(self):
        params = seeded_params(Content((1, 1, 1)), 3)
        table = generator(Content((1, 1, 1)), params)
        for row in table.matrix:
            assert sum(row) == 0

    def test_three_species_transition_graph(self):
        # arrows derived by hand from the cascade rules at a generic t
        params = SystemParams((F(1), F(1), F(1)), F(1, 2))
        table = generator(Content((1, 1, 1)), params)
        arrows = {
            (2, 1, 0): {(0, 2, 1), (0, 1, 2), (2, 0, 1)},
            (2, 0, 1): {(0, 2, 1), (0, 1, 2), (2, 1, 0)},
            (1, 2, 0): {(0, 2, 1), (1, 0, 2), (2, 0, 1)},
            (1, 0, 2): {(0, 1, 2), (2, 1, 0), (1, 2, 0)},
            (0, 2, 1): {(1, 0, 2), (2, 0, 1), (1, 2, 0)},
            (0, 1, 2): {(1, 0, 2), (2, 1, 0), (1, 2, 0)},
        }
        for src, targets in arrows.items():
            i = table.index(src)
            seen = {
                table.states[j]
                for j, v in enumerate(table.matrix[i])
                if j != i and v != 0
            }
            assert seen == targets, src
        # spot rates: active strongest particle accepts/rejects the weaker one
        assert table.rate((2, 1, 0), (0, 2, 1)) == F(2, 3)  # 1/(1+t) at t=1/2
        assert table.rate((2, 1, 0), (0, 1, 2)) == F(1, 3)  # t/(1+t)
        assert table.rate((2, 1, 0), (2, 0, 1)) == F(1)


class TestStationaryOracle:
    def test_single_particle_closed_form(self):
        params = SystemParams((F(2), F(3), F(5), F(1)), F(2, 7))
        pi = stationary_oracle(Content((3, 1)), params)
        total = sum(params.x)
        for eta, p in pi.probabilities.items():
            site = eta.index(1)
            assert p == params.x[site] / total

    def test_uniform_two_particles(self):
        params = SystemParams((F(1), F(1), F(1)), F(0))
        pi = stationary_oracle(Content((1, 2)), params)
        assert set(pi.probabilities.values()) == {F(1, 3)}

    def test_example_entry(self):
        # pi(2,1,0) = x1 x2 (x1 + x3/(1+t)) / (e1 e2)
        params = SystemParams((F(1), F(2), F(3)), F(1, 2))
        pi = stationary_oracle(Content((1, 1, 1)), params)
        x1, x2, x3 = params.x
        t = params.t
        e1 = x1 + x2 + x3
        e2 = x1 * x2 + x1 * x3 + x2 * x3
        assert pi[(2, 1, 0)] == x1 * x2 * (x1 + x3 / (1 + t)) / (e1 * e2)

    def test_single_species_independent_of_t(self):
        for n in range(2, 7):
            m1 = max(1, n // 2)
            content = Content((n - m1, m1))
            params0 = shared_params(n, 11, t=F(0))
            params1 = shared_params(n, 11, t=F(5, 7))
            pi0 = stationary_oracle(content, params0)
            pi1 = stationary_oracle(content, params1)
            assert pi0.probabilities == pi1.probabilities
            norm = elementary_eval(m1, params0.x)
            for eta, p in pi0.probabilities.items():
                expected = F(1)
                for site, v in enumerate(eta):
                    if v:
                        expected *= params0.x[site]
                assert p == expected / norm

    def test_state_space_bound(self):
        content = Content((1,) * 8)  # 8! = 40320 states
        params = SystemParams((F(1),) * 8, F(0))
        with pytest.raises(StateSpaceLimitError):
            stationary_oracle(content, params)

    def test_serialisation(self):
        params = SystemParams((F(1), F(1)), F(0))
        pi = stationary_oracle(Content((1, 1)), params)
        assert pi.to_csv() == "configuration,probability\n10,1/2\n01,1/2\n"
        assert "probabilities" in pi.to_json()


class TestProjection:
    def test_ordermap_validation(self):
        OrderMap({5: 4, 6: 4, 1: 2, 2: 2, 3: 2, 4: 2, 0: 2}, domain_max=6)
        with pytest.raises(ValueError):
            OrderMap({1: 3, 2: 1})
        with pytest.raises(ValueError):
            OrderMap({0: 1}, require_zero_fixed=True)

    def test_componentwise_application(self):
        phi = OrderMap({1: 2, 2: 2, 3: 2, 4: 2, 5: 4, 6: 4}, domain_max=6)
        assert project_config(phi, (5, 3, 0, 6)) == (4, 2, 0, 4)

    def test_identity(self):
        phi = OrderMap({}, domain_max=3)
        assert project_config(phi, (3, 1, 0)) == (3, 1, 0)

    def test_monotone_preserves_partition(self):
        phi = OrderMap({2: 1, 3: 1}, domain_max=4)
        lam = (4, 3, 2, 1, 0)
        image = project_config(phi, lam)
        assert tuple(sorted(image, reverse=True)) == image

    def test_stationary_projection_small(self):
        content = Content((1, 1, 1, 1))
        params = shared_params(4, 23)
        for phi in interval_merge_maps(content):
            assert projection_check(content, phi, params)


class TestAveragedKernel:
    def test_fixed_point(self):
        for content in (Content((1, 1, 1)), Content((1, 2, 1)), Content((2, 1, 1))):
            params = seeded_params(content, 5, t=F(2, 5))
            assert averaged_kernel_check(content, params)


class TestNumericBellOutcomes:
    def test_matches_symbolic(self):
        eta = (2, 4, 3, 0, 2, 4, 1, 3)
        t0 = F(3, 7)
        sym = {cfg: p.eval(t0) for cfg, p in bell_outcomes(eta, 3)}
        assert bell_outcomes_at(eta, 3, t0) == sym
