from .pnm import ImageSpaceConfig, load_image, load_image_config, read_pnm, write_overlay
from .syntax import format_formula, parse_formula, parse_pctl, parse_spatial
from .text import (load_population_model, load_snapshot_model, load_space,
                   load_spatial_model, load_valuation)
