import unittest
from unittest import mock

from src.common.errors import NonConvergenceError
from src.ewl_core.params import EwlParams
from src.ewl_core.sampling import sample_inverse
from src.gof import model_table as model_table_module
from src.gof.model_table import ModelTableRow, model_table
from src.inference.configuration import StartingPoints
from src.inference.fit_stats import FitEvents, FitStats
from src.submodels.families import CWL, EW, EWL, WEIBULL

FEW_STARTS = StartingPoints(alphas=(1.0, 5.0), thetas=(0.5,))


class TestModelTable(unittest.TestCase):
    def setUp(self):
        self.data = sample_inverse(EwlParams(3.0, 1.0, 1.2, 0.5), 200, 31)

    def test_rows_are_ranked_by_aic(self):
        fit_stats = FitStats()
        rows = model_table(self.data, [WEIBULL, EWL, EW], stats=fit_stats, starting_points=FEW_STARTS)
        self.assertEqual(len(rows), 3)
        self.assertFalse(any(row.failed for row in rows))
        aics = [row.fit.aic for row in rows]
        self.assertEqual(aics, sorted(aics))
        self.assertEqual(fit_stats.event_counts[FitEvents.FIT_STARTED], 3)
        d = rows[0].to_dict()
        self.assertIn("gof", d)
        self.assertEqual(d["aic"], rows[0].fit.aic)

    def test_failed_fits_are_kept_last(self):
        real_fit_family = model_table_module.fit_family

        def fit_family_failing_for_cwl(data, family, **kwargs):
            if family == CWL:
                raise NonConvergenceError("no starting point converged")
            return real_fit_family(data, family, **kwargs)

        with mock.patch.object(model_table_module, "fit_family", side_effect=fit_family_failing_for_cwl):
            rows = model_table(self.data, [CWL, WEIBULL], starting_points=FEW_STARTS)

        self.assertEqual([row.family for row in rows], [WEIBULL, CWL])
        self.assertTrue(rows[1].failed)
        self.assertEqual(rows[1].to_dict(), {"family": str(CWL), "error": "no starting point converged"})

    def test_invalid_requests(self):
        with self.assertRaises(ValueError):
            model_table(self.data, [])
        with self.assertRaises(ValueError):
            model_table(self.data, [EWL], workers=0)

    def test_sort_key(self):
        self.assertEqual(ModelTableRow(EWL, error="x").sort_key()[0], 1)


if __name__ == "__main__":
    unittest.main()
