from pathlib import Path
from typing import List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from psys_oracle.commands.status import ExitStatus
from psys_oracle.decider import GenParams, generate_system
from psys_oracle.dsl import render_system


class GenInput(BaseModel):
    out_dir: str
    seed: int = 1
    count: int = Field(1, ge=0)
    params: GenParams = GenParams()


class GenOutput(BaseModel):
    success: bool
    exit_status: ExitStatus
    files: List[str] = []
    error_message: Optional[str] = None


def system_file_name(seed: int) -> str:
    return f"gen_{seed:05d}.psys"


def gen_command(input_data: GenInput) -> GenOutput:
    """Write `count` generated systems, one per seed starting at `seed`."""
    files: List[str] = []
    if input_data.count == 0:
        return GenOutput(success=True, exit_status=ExitStatus.ACCEPT)
    try:
        out_dir = Path(input_data.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for seed in range(input_data.seed, input_data.seed + input_data.count):
            spec = generate_system(input_data.params.model_copy(update={"seed": seed}))
            path = out_dir / system_file_name(seed)
            path.write_text(render_system(spec), encoding="utf-8")
            files.append(str(path))
    except OSError as e:
        logger.error(f"Cannot write generated systems to {input_data.out_dir}: {e}")
        return GenOutput(
            success=False, exit_status=ExitStatus.USAGE, files=files, error_message=str(e)
        )
    logger.info(f"Generated {len(files)} system(s) in {input_data.out_dir}")
    return GenOutput(success=True, exit_status=ExitStatus.ACCEPT, files=files)
