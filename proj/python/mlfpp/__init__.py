"""Mittag-Leffler return-time modelling."""

from ._mlfpp import (
    cdf,
    estimate,
    fit_seasonal,
    log_pdf,
    mittag_leffler,
    pdf,
    quantile,
    sample,
)

__all__ = [
    "cdf",
    "estimate",
    "fit_seasonal",
    "log_pdf",
    "mittag_leffler",
    "pdf",
    "quantile",
    "sample",
]
