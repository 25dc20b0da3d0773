from .hausdorff import boundary, hausdorff
from .overlap import dsc, sensitivity, specificity
from .regions import Region, RegionMask, region_masks
from .report import (
    METRIC_COLUMNS,
    MetricsRow,
    aggregate,
    metrics_row,
    read_metrics_csv,
    region_dsc,
    render_aggregate,
    rows_to_frame,
    write_aggregate_csv,
    write_metrics_csv,
)
