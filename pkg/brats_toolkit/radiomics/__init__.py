from .extract import (
    FAMILY_FEATURES,
    FeatureDescriptor,
    FeatureMatrix,
    extract_matrix,
    extract_subject,
    feature_descriptors,
    feature_names,
    region_features,
)
from .firstorder import FIRST_ORDER_FEATURES, first_order
from .glcm import GLCM_FEATURES, cooccurrence, glcm, glcm_features
from .gldm import GLDM_FEATURES, dependence, gldm
from .glrlm import GLRLM_FEATURES, glrlm, run_lengths
from .glszm import GLSZM_FEATURES, glszm, size_zones
from .ngtdm import NGTDM_FEATURES, gray_tone_differences, ngtdm
from .quantize import DIRECTIONS, QuantizedRegion, discretize, quantize
from .shape import SHAPE_FEATURES, exposed_area, shape_features
