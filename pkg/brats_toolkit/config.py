BRATS_LABELS = (0, 1, 2, 4)
LABEL_TO_CLASS = {0: 0, 1: 1, 2: 2, 4: 3}
CLASS_TO_LABEL = (0, 1, 2, 4)
NUM_CLASSES = 4

# Network input order: FLAIR, T1Gd, T2, T1
CHANNEL_ORDER = ("flair", "t1ce", "t2", "t1")

# BraTS evaluator value for a Hausdorff distance against an empty mask
HAUSDORFF_SENTINEL = 373.128664

MISSING_VALUE = "NA"

NIFTI_HEADER_SIZE = 348
NIFTI_VOX_OFFSET = 352

CHECKPOINT_MAGIC = b"BTCK"
CHECKPOINT_VERSION = 1

REFERENCE_LAYER_COUNT = 77

CONFIG_ENV = "BRATS_CONFIG"

NULL_VALUES = set([None, "", "none", "None", "NA"])
