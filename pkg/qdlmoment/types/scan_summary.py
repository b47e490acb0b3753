import pydantic

from qdlmoment.types.moment_row import MomentRow


class ScanSummary(pydantic.BaseModel):
    """Rows of an error scan and the least-squares slope of log|E| on log X."""

    rows: list[MomentRow]
    fitted_slope: float
    slope_stderr: float
