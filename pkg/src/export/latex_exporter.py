"""LaTeX exporter."""

import math
import re

import pandas as pd

from src.export.base import BaseExporter

_SPECIAL = {
    "\\": r"\textbackslash{}",
    "&": r"\&",
    "%": r"\%",
    "$": r"\$",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
}
_SPECIAL_RE = re.compile("|".join(re.escape(c) for c in _SPECIAL))

COEFFICIENT_COLUMNS = ("term", "estimate", "se", "p_value")


def format_p_value(p: float) -> str:
    if p is None or (isinstance(p, float) and math.isnan(p)):
        return ""
    return "< 0.001" if p < 0.001 else f"{p:.3f}"


class LatexExporter(BaseExporter):
    """Export tables as booktabs LaTeX tabulars.

    Coefficient tables (``term, estimate, se, p_value``) get the
    ``Variable / Estimate / SE / p-value`` layout with three decimals.
    """

    format_name = "latex"
    file_extension = "tex"

    def render(self, table: pd.DataFrame, title: str = "") -> str:
        if all(c in table.columns for c in COEFFICIENT_COLUMNS):
            header = ["Variable", "Estimate", "SE", "p-value"]
            body = [
                [
                    self._escape_latex(str(row.term)),
                    self._number(row.estimate),
                    self._number(row.se),
                    format_p_value(row.p_value),
                ]
                for row in table.itertuples(index=False)
            ]
            align = "l" + "r" * 3
        else:
            header = [self._escape_latex(str(c)) for c in table.columns]
            body = [
                [self._cell(v) for v in row]
                for row in table.itertuples(index=False, name=None)
            ]
            align = "l" + "r" * (len(header) - 1)

        lines = ["\\begin{table}[ht]", "\\centering"]
        if title:
            lines.append(f"\\caption{{{self._escape_latex(title)}}}")
        lines += [
            f"\\begin{{tabular}}{{{align}}}",
            "\\toprule",
            " & ".join(header) + " \\\\",
            "\\midrule",
        ]
        lines += [" & ".join(cells) + " \\\\" for cells in body]
        lines += ["\\bottomrule", "\\end{tabular}", "\\end{table}", ""]
        return "\n".join(lines)

    @staticmethod
    def _number(value: float) -> str:
        if value is None or (isinstance(value, float) and math.isnan(value)):
            return ""
        return f"{value:.3f}"

    def _cell(self, value) -> str:
        if isinstance(value, float):
            return self._number(value)
        return self._escape_latex(str(value))

    def _escape_latex(self, text: str) -> str:
        """Escape special LaTeX characters."""
        return _SPECIAL_RE.sub(lambda m: _SPECIAL[m.group(0)], text)
