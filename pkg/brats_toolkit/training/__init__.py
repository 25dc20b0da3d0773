from .hard_mining import (
    HardMiningReport,
    hard_mine,
    hard_mining_schedule,
    select_hard,
    subject_dsc,
)
from .scheduler import PlateauScheduler
from .split import stratified_split
from .trainer import EpochRecord, TrainingSubject, prepare, train_stage
from .weights import class_frequencies, class_weights, weights_from_frequencies
