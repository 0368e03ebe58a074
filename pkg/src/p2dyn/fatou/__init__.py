"""Fatou-set classifiers, rasters and the derived checks."""

from .analysis import (
    CompareReport,
    ComponentStat,
    ConnectivityReport,
    DichotomyReport,
    GraphCloud,
    ProbeParams,
    classifier_compare,
    cloud_hausdorff,
    connectivity_check,
    dichotomy_check,
    footprint_patch,
    graph_cloud,
    graph_hausdorff,
)
from .classify import (
    FATOU,
    JULIA,
    NEAR_IND,
    UNRESOLVED,
    VERDICTS,
    ClassifierParams,
    FatouRaster,
    equicontinuity_classify,
    fatou_raster,
    green_classify,
    green_verdicts,
    label_components,
)
from .io import write_ppm
