"""SNR threshold probabilities and the composed coverage probability.

Direct link:   SNR_d = (P_tx G_t G_r / sigma^2) (wavelength / 4 pi D_tr)^alpha
Indirect link: SNR_i = (P_tx G_t G_r M^4 / sigma^2)
                          (wavelength / (4 pi D_ts D_sr))^alpha

Inverting the threshold SNR >= tau gives a critical distance for the direct
link and, for the indirect link, a critical D_sr radius that scales like
1/D_ts.  Coverage composes the LOS probabilities with these threshold
probabilities under a two-step association: the receiver uses the direct
link when it is LOS and above threshold, otherwise the reflected link.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockage import BlockageParams, p_los_expected
from .distributions import LinkDistanceModel, LinkDistanceTables, tabulate_link_distributions
from .errors import DomainError, ModelInconsistencyError
from .numerics import DEFAULT_GRID_POINTS, PdfTable

_PROB_SLACK = 1e-9


@dataclass(frozen=True)
class RadioParams:
    p_tx: float        # transmit power [W]
    g_t: float         # transmitter antenna gain, linear
    g_r: float         # receiver antenna gain, linear
    m: int             # RIS element count per surface
    sigma2: float      # noise power [W]
    wavelength: float  # carrier wavelength [m]
    tau: float         # SNR threshold, linear
    alpha: float       # attenuation exponent

    def __post_init__(self):
        for name in ("p_tx", "g_t", "g_r", "sigma2", "wavelength", "tau"):
            if not getattr(self, name) > 0:
                raise DomainError(f"radio parameter {name} must be strictly positive")
        if int(self.m) < 1:
            raise DomainError("RIS element count must be at least 1")
        object.__setattr__(self, "m", int(self.m))
        if not self.alpha >= 1:
            raise DomainError("attenuation exponent must be >= 1")

    def critical_distance_direct(self) -> float:
        """Largest D_tr with SNR_d >= tau."""
        k = self.p_tx * self.g_t * self.g_r / (self.tau * self.sigma2)
        return self.wavelength / (4.0 * np.pi) * k ** (1.0 / self.alpha)

    def critical_product_indirect(self) -> float:
        """Largest D_ts * D_sr with SNR_i >= tau."""
        k = self.p_tx * self.g_t * self.g_r * float(self.m) ** 4 / (self.tau * self.sigma2)
        return self.wavelength / (4.0 * np.pi) * k ** (1.0 / self.alpha)


@dataclass(frozen=True)
class CoverageBreakdown:
    """All factor probabilities plus the composed coverage terms."""

    p_los_ts: float
    p_los_sr: float
    p_los_tr: float
    p_snr_i: float
    p_snr_d: float
    p_cov_direct: float
    p_cov_indirect: float
    p_cov_total: float

    def __post_init__(self):
        for name in ("p_los_ts", "p_los_sr", "p_los_tr", "p_snr_i", "p_snr_d",
                     "p_cov_direct", "p_cov_indirect", "p_cov_total"):
            v = getattr(self, name)
            if not (-_PROB_SLACK <= v <= 1.0 + _PROB_SLACK):
                raise DomainError(f"{name}={v!r} is not a probability")
        if abs(self.p_cov_total - self.p_cov_direct - self.p_cov_indirect) > 1e-9:
            raise ModelInconsistencyError(
                "total coverage must equal direct + indirect"
            )


def _partial_pdf_integral(pdf: PdfTable, upper: float) -> float:
    """Trapezoid integral of the density from the grid start up to ``upper``,
    with an exact partial cell at the cut point."""
    g, f = pdf.grid, pdf.densities
    if upper <= g[0]:
        return 0.0
    if upper >= g[-1]:
        return pdf.mass
    i = int(np.searchsorted(g, upper, side="right")) - 1
    total = float(np.trapezoid(f[: i + 1], g[: i + 1]))
    f_up = float(np.interp(upper, g, f))
    total += 0.5 * (f[i] + f_up) * (upper - g[i])
    return total


def p_snr_direct(radio: RadioParams, f_tr: PdfTable) -> float:
    """P(SNR_d >= tau): mass of the D_tr law below the critical distance."""
    d_star = radio.critical_distance_direct()
    return min(max(_partial_pdf_integral(f_tr, d_star), 0.0), 1.0)


def p_snr_indirect(radio: RadioParams, f_ts: PdfTable, f_sr: PdfTable) -> float:
    """P(SNR_i >= tau) assuming D_ts and D_sr independent.

    Integrates the D_ts density against the D_sr CDF evaluated at the
    critical radius c / d_ts, where c is the critical distance product.
    The D_sr CDF is the running trapezoid of its density (one pass), and
    the d_ts -> 0 end is harmless: the critical radius diverges there and
    the CDF saturates at its final value.
    """
    c = radio.critical_product_indirect()
    cdf_sr_vals = np.concatenate([
        [0.0],
        np.cumsum(0.5 * (f_sr.densities[1:] + f_sr.densities[:-1]) * np.diff(f_sr.grid)),
    ])
    x = f_ts.grid
    with np.errstate(divide="ignore"):
        radius = np.where(x > 0.0, c / np.maximum(x, 1e-300), np.inf)
    f_at_radius = np.interp(radius, f_sr.grid, cdf_sr_vals)
    val = float(np.trapezoid(f_ts.densities * f_at_radius, x))
    return min(max(val, 0.0), 1.0)


def coverage_direct(p_los_tr: float, p_snr_d: float) -> float:
    """Direct-link coverage: LOS and above threshold."""
    return p_los_tr * p_snr_d


def coverage_indirect(p_los_ts: float, p_los_sr: float, p_los_tr: float,
                      p_snr_i: float, p_snr_d: float) -> float:
    """Indirect-link coverage under the two-step association.

    The three-term expansion (direct blocked but fast enough, direct LOS but
    too slow, direct blocked and too slow) collapses to
    p_los_ts * p_los_sr * p_snr_i * (1 - p_los_tr * p_snr_d); both forms are
    evaluated and must agree to float precision.
    """
    for name, v in (("p_los_ts", p_los_ts), ("p_los_sr", p_los_sr),
                    ("p_los_tr", p_los_tr), ("p_snr_i", p_snr_i),
                    ("p_snr_d", p_snr_d)):
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"{name}={v!r} is not a probability")
    base = p_los_ts * p_los_sr * p_snr_i
    p_nlos_tr = 1.0 - p_los_tr
    literal = (base * p_nlos_tr * p_snr_d
               + base * p_los_tr * (1.0 - p_snr_d)
               + base * p_nlos_tr * (1.0 - p_snr_d))
    simplified = base * (1.0 - p_los_tr * p_snr_d)
    if abs(literal - simplified) > 1e-12:
        raise ModelInconsistencyError(
            f"indirect coverage forms disagree: {literal!r} vs {simplified!r}"
        )
    return simplified


def coverage_total(model: LinkDistanceModel, blk: BlockageParams,
                   radio: RadioParams,
                   tables: LinkDistanceTables | None = None,
                   points: int = DEFAULT_GRID_POINTS) -> CoverageBreakdown:
    """Tabulate the distance laws (unless supplied) and compose the coverage
    probability from the five factor probabilities."""
    if tables is None:
        tables = tabulate_link_distributions(model, points)
    p_ts = p_los_expected(blk, tables.pdf_ts)
    p_sr = p_los_expected(blk, tables.pdf_sr)
    p_tr = p_los_expected(blk, tables.pdf_tr)
    snr_d = p_snr_direct(radio, tables.pdf_tr)
    snr_i = p_snr_indirect(radio, tables.pdf_ts, tables.pdf_sr)
    direct = coverage_direct(p_tr, snr_d)
    indirect = coverage_indirect(p_ts, p_sr, p_tr, snr_i, snr_d)
    return CoverageBreakdown(
        p_los_ts=p_ts, p_los_sr=p_sr, p_los_tr=p_tr,
        p_snr_i=snr_i, p_snr_d=snr_d,
        p_cov_direct=direct, p_cov_indirect=indirect,
        p_cov_total=direct + indirect,
    )
