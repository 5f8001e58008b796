import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from psys_oracle.commands.status import ExitStatus
from psys_oracle.decider import CompareReport, compare
from psys_oracle.dsl import load_system
from psys_oracle.exceptions import InvalidSystemError, PsysSyntaxError
from psys_oracle.tables import SearchSettings


class CompareInput(BaseModel):
    paths: List[str]
    budget: Optional[int] = Field(None, gt=0)
    jobs: int = Field(1, ge=1)
    json_path: Optional[str] = None
    settings: SearchSettings = SearchSettings()


class CompareOutput(BaseModel):
    success: bool
    exit_status: ExitStatus
    reports: List[CompareReport] = []
    agreed: int = 0
    compared: int = 0
    skipped: int = 0
    error_message: Optional[str] = None

    def tally(self) -> str:
        return f"{self.agreed}/{self.compared} agree"


def collect_systems(paths: List[str]) -> List[Path]:
    """Files as given; directories contribute their *.psys files in name order."""
    found: List[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found.extend(sorted(path.glob("*.psys")))
        elif path.exists():
            found.append(path)
        else:
            raise FileNotFoundError(f"no such file or directory: {raw}")
    return found


def compare_file(path: Path, budget: Optional[int], settings: SearchSettings) -> CompareReport:
    name = path.stem
    try:
        spec = load_system(path)
    except (PsysSyntaxError, InvalidSystemError) as e:
        logger.warning(f"{name}: invalid system, skipped ({e})")
        return CompareReport(name=name, skipped=True, reason="invalid system")
    return compare(spec, name=name, budget=budget, settings=settings)


def compare_command(input_data: CompareInput) -> CompareOutput:
    """Compare both deciders over files and directories; disagreements exit with status 2."""
    try:
        files = collect_systems(input_data.paths)
    except OSError as e:
        logger.error(str(e))
        return CompareOutput(success=False, exit_status=ExitStatus.USAGE, error_message=str(e))

    logger.info(f"Comparing deciders on {len(files)} system(s) with {input_data.jobs} job(s)")
    if input_data.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=input_data.jobs) as executor:
            reports = list(
                executor.map(
                    compare_file,
                    files,
                    [input_data.budget] * len(files),
                    [input_data.settings] * len(files),
                )
            )
    else:
        reports = [compare_file(f, input_data.budget, input_data.settings) for f in files]

    skipped = sum(1 for r in reports if r.skipped)
    agreed = sum(1 for r in reports if not r.skipped and r.agree)
    compared = len(reports) - skipped
    output = CompareOutput(
        success=agreed == compared,
        exit_status=ExitStatus.ACCEPT if agreed == compared else ExitStatus.INVALID,
        reports=reports,
        agreed=agreed,
        compared=compared,
        skipped=skipped,
    )
    if input_data.json_path:
        try:
            Path(input_data.json_path).write_text(
                json.dumps([r.model_dump(mode="json") for r in reports], indent=2) + "\n",
                encoding="utf-8",
            )
        except OSError as e:
            logger.error(f"Cannot write {input_data.json_path}: {e}")
            output.success = False
            output.exit_status = ExitStatus.USAGE
            output.error_message = str(e)
    if output.exit_status == ExitStatus.ACCEPT:
        logger.success(f"{output.tally()}, {skipped} skipped")
    else:
        logger.error(f"{output.tally()}, {skipped} skipped")
    return output
