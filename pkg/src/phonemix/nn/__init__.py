"""Minimal differentiable computation: tensors, layers, Adam, checkpoints."""

from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import check_gradients
from .layers import (
    ParameterSet,
    attention_encoder,
    bidirectional_recurrent,
    conv_stack,
    gru_step,
    init_attention,
    init_bidirectional,
    init_conv_stack,
    init_embedding,
    init_encoder,
    init_gru,
    init_linear,
    linear,
    run_encoder,
    sinusoidal_positions,
    uniform_init,
)
from .optim import AdamState, adam_step
from .tensor import (
    Tensor,
    absolute,
    add,
    concat,
    conv1d,
    exp,
    gather_rows,
    log,
    masked_softmax,
    matmul,
    mean_all,
    mul,
    repeat_rows,
    reshape,
    scale,
    sigmoid,
    slice_rows,
    softmax_rows,
    sub,
    sum_all,
    sum_rows,
    tanh,
    tensor,
)

__all__ = [
    "AdamState",
    "ParameterSet",
    "Tensor",
    "absolute",
    "adam_step",
    "add",
    "attention_encoder",
    "bidirectional_recurrent",
    "check_gradients",
    "concat",
    "conv1d",
    "conv_stack",
    "exp",
    "gather_rows",
    "gru_step",
    "init_attention",
    "init_bidirectional",
    "init_conv_stack",
    "init_embedding",
    "init_encoder",
    "init_gru",
    "init_linear",
    "linear",
    "load_checkpoint",
    "log",
    "masked_softmax",
    "matmul",
    "mean_all",
    "mul",
    "repeat_rows",
    "reshape",
    "run_encoder",
    "save_checkpoint",
    "scale",
    "sigmoid",
    "sinusoidal_positions",
    "slice_rows",
    "softmax_rows",
    "sub",
    "sum_all",
    "sum_rows",
    "tanh",
    "tensor",
]
