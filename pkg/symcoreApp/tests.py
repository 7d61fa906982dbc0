import random

import sympy
from django.test import SimpleTestCase

from symcoreApp.errors import ParityError, StructuralError
from symcoreApp.graded import GradedExpr, Template, atom, differentiate, graded_normalize, product
from symcoreApp.indices import Space, down, inner_down, inner_up, up
from symcoreApp.operations import canonicalize, contract, substitute
from symcoreApp.reduction import TraceReducer
from symcoreApp.scalars import DIM, IEPS, XI, dot
from symcoreApp.serializers import dumps, from_dict, to_dict, to_latex
from symcoreApp.tensor import Momentum, TensorExpr, evaluate

mu, nu, rho, sigma = "mu", "nu", "rho", "sigma"


def eta(a, b):
    return TensorExpr.metric(a, b)


def k(vector, index):
    return TensorExpr.momentum(vector, index)


class ProductTest(SimpleTestCase):
    def test_momentum_times_metric(self):
        e = k("k", up(mu)) * eta(down(mu), down(nu))
        self.assertEqual(len(e), 1)
        self.assertEqual(canonicalize(e).terms, canonicalize(k("k", down(nu))).terms)

    def test_colliding_dummies_are_renamed(self):
        left = k("k", up(mu)) * k("q", down(mu))
        right = k("p", up(mu)) * k("r", down(mu))
        (atoms,) = (left * right).terms
        self.assertEqual(len({index.name for a in atoms for index in a.indices}), 2)
        self.assertEqual(sympy.simplify(canonicalize(left * right).scalar_value() - dot("k", "q") * dot("p", "r")), 0)


class CanonicalizeTest(SimpleTestCase):
    def test_lorentz_trace_is_four(self):
        e = eta(up(mu), up(nu)) * eta(down(mu), down(nu))
        self.assertEqual(canonicalize(e).scalar_value(), 4)

    def test_inner_trace_is_symbolic_dimension(self):
        e = TensorExpr.metric(inner_up("M"), inner_up("N")) * TensorExpr.metric(inner_down("M"), inner_down("N"))
        self.assertEqual(canonicalize(e).scalar_value(), DIM)

    def test_contraction_identity(self):
        e = k("k", down(mu)) * k("k", down(nu)) * eta(up(mu), up(nu)) - dot("k", "k")
        self.assertTrue(canonicalize(e).is_zero)

    def test_idempotent_and_congruent(self):
        a = k("k1", up(mu)) * k("k2", down(mu)) * k("k1", up(nu)) + eta(up(nu), up(rho)) * k("k2", down(rho))
        b = 3 * k("k2", up(nu)) - eta(up(nu), down(sigma)) * k("k1", up(sigma))
        once = canonicalize(a)
        self.assertEqual(canonicalize(once).terms, once.terms)
        self.assertEqual(canonicalize(a + b).terms, canonicalize(canonicalize(a) + canonicalize(b)).terms)

    def test_dummy_renaming_invariance(self):
        first = k("k", up("a")) * k("q", down("a")) * k("p", up(mu))
        second = k("k", up("zz")) * k("q", down("zz")) * k("p", up(mu))
        self.assertEqual(canonicalize(first).terms, canonicalize(second).terms)

    def test_index_used_three_times_names_label(self):
        e = TensorExpr({(Momentum("k", up(mu)), Momentum("q", down(mu)), Momentum("p", down(mu))): 1})
        with self.assertRaises(StructuralError) as caught:
            canonicalize(e)
        self.assertEqual(caught.exception.label, mu)

    def test_same_variance_pair_is_rejected(self):
        e = TensorExpr({(Momentum("k", up(mu)), Momentum("q", up(mu))): 1})
        with self.assertRaises(StructuralError):
            canonicalize(e)

    def test_numeric_value_matches_canonical_form(self):
        rng = random.Random(7)
        e = (
            k("k1", up(mu)) * k("k2", down(mu)) * eta(up(nu), up(rho)) * k("k1", down(nu)) * k("k3", down(rho))
            + eta(up(mu), down(mu)) * k("k2", up(sigma)) * k("k2", down(sigma))
            - TensorExpr.metric(inner_up("M"), inner_down("M")) * k("K1", inner_up("N")) * k("K2", inner_down("N"))
        )
        for inner_dim in (2, 3):
            vectors = {name: [rng.randint(-5, 5) for _ in range(4)] for name in ("k1", "k2", "k3")}
            vectors.update({name: [rng.randint(-5, 5) for _ in range(inner_dim)] for name in ("K1", "K2")})
            self.assertEqual(
                evaluate(e, vectors, inner_dim=inner_dim),
                evaluate(canonicalize(e), vectors, inner_dim=inner_dim),
            )


class ContractTest(SimpleTestCase):
    def test_metric_lowers_index(self):
        e = k("k", up(mu)) * eta(down(rho), down(nu))
        self.assertEqual(contract(e, up(mu), down(rho)), k("k", down(nu)))

    def test_inner_metric(self):
        e = k("K", inner_up("M")) * TensorExpr.metric(inner_down("A"), inner_down("N"))
        self.assertEqual(contract(e, inner_up("M"), inner_down("A")), k("K", inner_down("N")))

    def test_label_not_free(self):
        e = k("k", up(mu)) * k("q", down(mu))
        with self.assertRaises(StructuralError):
            contract(e, up(mu), down(mu))

    def test_space_mismatch(self):
        e = k("k", up(mu)) * k("K", inner_down("M"))
        with self.assertRaises(StructuralError):
            contract(e, up(mu), inner_down("M"))


class SubstituteTest(SimpleTestCase):
    def test_scalar_binding(self):
        e = (1 - XI) * k("k", down(mu)) / (dot("k", "k") - IEPS)
        self.assertTrue(substitute(e, {XI: 1}).is_zero)

    def test_momentum_to_zero(self):
        e = k("K1", inner_up("L")) * k("k2", down(mu)) + dot("K1", "K2") * k("k1", down(mu)) * k("K3", inner_up("L"))
        self.assertTrue(substitute(e, {"K1": {}, "K3": {}}).is_zero)

    def test_momentum_conservation_follows_dot_products(self):
        e = TensorExpr.scalar(dot("k3", "k3"))
        result = substitute(e, {"k3": {"k1": -1, "k2": -1}})
        expected = dot("k1", "k1") + 2 * dot("k1", "k2") + dot("k2", "k2")
        self.assertEqual(result.scalar_value(), expected)


class GradedNormalizeTest(SimpleTestCase):
    def test_odd_atoms_anticommute(self):
        theta = atom("theta")
        omega = atom("omega", inner_up("M"))
        self.assertTrue((theta * omega + omega * theta).is_zero)

    def test_odd_square_vanishes(self):
        self.assertTrue((atom("theta") * atom("theta")).is_zero)

    def test_leibniz_rule(self):
        composite = atom("omega", inner_up("K")) * atom("omega", inner_up("M"), derivatives=[inner_down("K")])
        derived = differentiate(composite, down(mu))
        expected = (
            atom("omega", inner_up("K"), derivatives=[down(mu)]) * atom("omega", inner_up("M"), derivatives=[inner_down("K")])
            + atom("omega", inner_up("K")) * atom("omega", inner_up("M"), derivatives=[inner_down("K"), down(mu)])
        )
        self.assertEqual(derived, expected)

    def test_symmetric_contraction_of_odd_pair_vanishes(self):
        e = product(
            atom("omega", inner_up("K")), atom("omega", inner_up("L")),
            atom("A", down(mu), inner_up("M"), derivatives=[inner_down("K"), inner_down("L")]),
        )
        self.assertTrue(e.is_zero)

    def test_idempotent_and_preserves_grading(self):
        e = 2 * atom("omegabar", inner_down("R")) * atom("omega", inner_up("R")) * atom("h", inner_down("S")) \
            + atom("h", inner_down("S")) * atom("omega", inner_up("K")) * atom("omegabar", inner_down("K"))
        once = graded_normalize(e)
        self.assertEqual(graded_normalize(GradedExpr(once.terms)).terms, once.terms)
        self.assertEqual(once.ghost_numbers(), e.ghost_numbers())
        self.assertEqual(once.parities(), e.parities())

    def test_dummy_relabeling_skips_free_names(self):
        e = graded_normalize(atom("omega", inner_up("K")) * atom("omega", inner_up("_A0"), derivatives=[inner_down("K")]))
        (atoms,) = e.terms
        names = [i.name for a in atoms for i in a.all_indices]
        self.assertEqual(names.count("_A0"), 1)
        self.assertEqual(len(set(names)), 2)

    def test_field_strength_is_antisymmetric(self):
        e = atom("F", down(mu), down(nu)) + atom("F", down(nu), down(mu))
        self.assertTrue(e.is_zero)

    def test_operators_keep_their_order(self):
        e = atom("B", down(mu)) * atom("C") - atom("C") * atom("B", down(mu))
        self.assertFalse(e.is_zero)
        self.assertTrue(e.as_commutative().is_zero)


class GradedSubstituteTest(SimpleTestCase):
    def test_parity_violation(self):
        template = Template((inner_up("X"),), atom("A", down(mu), inner_up("X")))
        with self.assertRaises(ParityError):
            substitute(atom("omega", inner_up("M")), {"omega": template})

    def test_capture_avoiding(self):
        c_image = Template((), -atom("Acal", down("a"), derivatives=[up("a")]))
        e = atom("C") * atom("B", down("a"), derivatives=[up("a")])
        result = substitute(e, {"C": c_image})
        expected = -atom("Acal", down(mu), derivatives=[up(mu)]) * atom("B", down(nu), derivatives=[up(nu)])
        self.assertEqual(result, expected)

    def test_derivative_acts_on_image(self):
        b_image = Template((down("x"),), -2 * atom("Acal", down("x")))
        e = atom("B", down(mu), derivatives=[up(mu)])
        self.assertEqual(substitute(e, {"B": b_image}), -2 * atom("Acal", down(nu), derivatives=[up(nu)]))


class TraceReducerTest(SimpleTestCase):
    def test_partial_integration_under_trace(self):
        reducer = TraceReducer()
        divergence = atom("B", down(mu), derivatives=[up(mu)]) * atom("C")
        moved = atom("B", down(mu)) * atom("C", derivatives=[up(mu)])
        self.assertTrue(reducer.equivalent(divergence, -moved))

    def test_cyclicity(self):
        reducer = TraceReducer()
        a = atom("C") * atom("B", up(mu)) * atom("B", down(mu))
        b = atom("B", up(mu)) * atom("C") * atom("B", down(mu))
        self.assertTrue(reducer.equivalent(a, b))
        self.assertFalse(reducer.equivalent(a, 2 * b))


class SerializationTest(SimpleTestCase):
    def test_tensor_json_round_trip(self):
        e = sympy.I / 3 * k("k2", up(mu)) * k("k2", up(nu)) - sympy.I / 12 * eta(up(mu), up(nu)) * dot("k2", "k2")
        self.assertEqual(from_dict(to_dict(e)), e)
        self.assertEqual(dumps(e), dumps(canonicalize(e)))

    def test_graded_json_round_trip(self):
        e = atom("omegabar", inner_down("R")) * atom("A", down(mu), inner_up("R"), derivatives=[up(mu)])
        self.assertEqual(from_dict(to_dict(e)), e)

    def test_latex_mentions_metric(self):
        self.assertIn(r"\eta", to_latex(eta(up(mu), up(nu))))
        self.assertIn(r"\partial", to_latex(atom("B", down(mu), derivatives=[up(mu)])))

    def test_space_of_vector_is_fixed_by_case(self):
        with self.assertRaises(StructuralError):
            Momentum("K", up(mu))
        self.assertIs(Momentum("K", inner_up("M")).index.space, Space.INNER)


class SymcoreApiTest(SimpleTestCase):
    def setUp(self):
        from ninja.testing import TestClient
        from symcoreApp.api import symcore_router
        self.client = TestClient(symcore_router)

    def test_canonicalize_endpoint(self):
        e = eta(up(mu), up(nu)) * eta(down(mu), down(nu))
        raw = {"algebra": "tensor", "terms": [{"coefficient": "1", "atoms": [
            {"kind": "eta", "indices": [{"name": "mu", "space": "lorentz", "variance": "up"},
                                        {"name": "nu", "space": "lorentz", "variance": "up"}]},
            {"kind": "eta", "indices": [{"name": "mu", "space": "lorentz", "variance": "down"},
                                        {"name": "nu", "space": "lorentz", "variance": "down"}]},
        ]}]}
        response = self.client.post('/canonicalize', json={"expression": raw})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["expression"], to_dict(e))
        self.assertEqual(response.json()["expression"]["terms"][0]["coefficient"], "4")

    def test_contract_endpoint_rejects_bound_label(self):
        e = k("k", up(mu)) * k("q", down(mu))
        response = self.client.post('/contract', json={
            "expression": to_dict(e),
            "upper": {"name": "mu", "variance": "up"},
            "lower": {"name": "mu", "variance": "down"},
        })
        self.assertEqual(response.status_code, 400)

    def test_substitute_endpoint(self):
        e = (1 - XI) * k("k", down(mu))
        response = self.client.post('/substitute', json={"expression": to_dict(e), "scalars": {"xi": "1"}})
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.json()["is_zero"])
