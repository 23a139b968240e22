from .artifact import INPUT_KIND, ModelArtifact, decision_scores, predict
from .cnn import CnnConfig
from .core import AdamState, adam_step, bce_loss, softmax_cross_entropy
from .logreg import LogRegModel, logreg_train
from .lstm import LstmConfig, lstm_forward, lstm_param_count
from .svm import SvmModel, svm_train_smo

__all__ = [
    "INPUT_KIND", "ModelArtifact", "decision_scores", "predict", "CnnConfig", "AdamState",
    "adam_step", "bce_loss", "softmax_cross_entropy", "LogRegModel", "logreg_train",
    "LstmConfig", "lstm_forward", "lstm_param_count", "SvmModel", "svm_train_smo",
]
