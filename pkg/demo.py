#!/usr/bin/env python3
"""
qumem Demo Script

Walks through the main computations: single-point mutual information,
the crossover search and a closed-form check against the brute-force oracle.
"""

import sys
from pathlib import Path

# Add src to path for development
sys.path.insert(0, str(Path(__file__).parent / "src"))

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from qumem.analysis.crossover import crossover_mu
from qumem.analysis.curves import mi_point
from qumem.analysis.validation import validate
from qumem.core.config import Config
from qumem.models.channel import ChannelSpec, Family, InputSelector
from qumem.models.results import Method


class QumemDemo:
    """qumem demonstration class."""

    def __init__(self):
        """Initialize the demo."""
        self.console = Console()
        self.numerics = Config().numerics()

    def setup(self):
        self.console.print(Panel.fit(
            "[bold blue]⚛️ qumem Demo[/bold blue]\n"
            "Mutual information of qudit channels with correlated noise",
            border_style="blue"
        ))

    def run_information_points(self):
        """Product against entangled inputs over the memory parameter."""
        table = Table(title="QD, d = 4, eta = 0.8, nu = 1")
        table.add_column("mu", justify="right")
        table.add_column("I(product)", justify="right")
        table.add_column("I(entangled)", justify="right")
        table.add_column("winner")

        for mu in (0.0, 0.25, 0.5, 0.75, 1.0):
            spec = ChannelSpec(family=Family.QD, d=4, eta=0.8, mu=mu, nu=1.0)
            product = mi_point(spec, InputSelector.product(), Method.AUTO, self.numerics)
            entangled = mi_point(spec, InputSelector.entangled(), Method.AUTO, self.numerics)
            winner = "entangled" if entangled.information > product.information else "product"
            table.add_row(
                f"{mu:.2f}", f"{product.information:.6f}", f"{entangled.information:.6f}", winner
            )

        self.console.print(table)

    def run_crossover(self):
        """Crossover points for the first few even dimensions."""
        table = Table(title="Crossover mu_c, QD, eta = 0.8")
        table.add_column("d", justify="right")
        table.add_column("nu", justify="right")
        table.add_column("status")
        table.add_column("mu_c", justify="right")

        for d in (2, 4, 6):
            for nu in (0.0, 1.0):
                report = crossover_mu(
                    ChannelSpec(family=Family.QD, d=d, eta=0.8, nu=nu), numerics=self.numerics
                )
                mu_c = "-" if report.mu_c is None else f"{report.mu_c:.8f}"
                table.add_row(str(d), f"{nu:g}", report.status.value, mu_c)

        self.console.print(table)

    def run_validation(self):
        """Closed form against the oracle, with the errata it records."""
        spec = ChannelSpec(family=Family.QCD, d=3, eta=0.4, mu=0.6, nu=0.5)
        report = validate(spec, InputSelector.entangled(), self.numerics)

        style = "green" if report.passed else "red"
        self.console.print(Panel(
            f"spectrum deviation: {report.spectrum_deviation:.3e}\n"
            f"matrix deviation:   {report.matrix_deviation:.3e}\n"
            f"errata recorded:    {len(report.errata)}",
            title="QCD, d = 3 closed form vs oracle",
            border_style=style,
        ))
        for record in report.errata:
            self.console.print(
                f"  [yellow]{record.location}[/yellow]: {record.discrepancy} "
                f"({record.max_deviation_before:.2e} -> {record.max_deviation_after:.2e})"
            )


def main():
    """Main demo function."""
    demo = QumemDemo()
    demo.setup()
    demo.run_information_points()
    demo.run_crossover()
    demo.run_validation()


if __name__ == "__main__":
    main()
