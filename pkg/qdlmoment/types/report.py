import pydantic

Cell = float | int | str | bool


class Report(pydantic.BaseModel):
    """A table produced by one CLI subcommand and whether its checks passed."""

    name: str
    header: list[str]
    rows: list[list[Cell]]
    passed: bool = True

    @pydantic.model_validator(mode="after")
    def validate_widths(self) -> "Report":
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(
                    f"Row {row} has {len(row)} cells, header has {len(self.header)}"
                )
        return self
