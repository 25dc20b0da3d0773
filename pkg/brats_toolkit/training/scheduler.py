import dataclasses
import logging
import math


logger = logging.getLogger(__name__)


@dataclasses.dataclass
class PlateauScheduler:
    """
    Multiplies the learning rate by ``factor`` once validation loss has not
    improved for ``patience`` consecutive epochs.
    """

    lr: float
    patience: int
    factor: float
    best: float = dataclasses.field(default=math.inf)
    wait: int = dataclasses.field(default=0)
    decays: int = dataclasses.field(default=0)

    def step(self, validation_loss: float) -> float:
        if validation_loss < self.best:
            self.best = validation_loss
            self.wait = 0
            return self.lr

        self.wait += 1
        if self.wait >= self.patience:
            self.lr *= self.factor
            self.decays += 1
            self.wait = 0
            logger.info("Validation loss plateaued, learning rate now %.3g", self.lr)

        return self.lr
