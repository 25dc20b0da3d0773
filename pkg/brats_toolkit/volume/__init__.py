from .nifti import parse_nifti, read_nifti, save_nifti, write_nifti
from .volume import Modality, Subject, Volume, VolumeKind, brain_mask, normalize
