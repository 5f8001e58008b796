from pydantic import BaseModel, ConfigDict, Field


class SourceSpan(BaseModel):
    """1-based position of a token inside .psys text."""

    model_config = ConfigDict(frozen=True)

    line: int = Field(ge=1)
    column: int = Field(ge=1)

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"
