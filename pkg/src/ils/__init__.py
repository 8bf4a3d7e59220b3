"""Integer least squares: reductions, searches and benchmark tooling."""
from .eils import EilsProblem, box_bounds, clll_reduce, second_nearest_on_interval, solve_eils
from .errors import (DegenerateRotation, IlsError, InvalidCase, NonTermination,
                     NonUnimodular, NotPositiveDefinite, NotSymmetric,
                     RankDeficient, SingularTriangular)
from .quadratic import (LtdlState, REDUCTIONS, gauss_igt, lambda_reduce,
                        minreduction, mreduction, noreduction, permute_pair,
                        preduction, psi)
from .search import (SearchOutcome, quad_to_standard, search_eils,
                     search_quadratic, search_standard, trace_rows)
from .standard import (QrzReduction, igt_upper, lll_reduce, permute_adjacent,
                       plll_reduce, sorted_qr)
