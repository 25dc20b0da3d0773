from .losses import dice_loss, one_hot, weighted_cross_entropy
from .ops import concat, conv3d, conv3d_transposed, maxpool3d, relu, softmax
from .optim import AdamState, adam_step
from .tensor import Graph, Tensor
