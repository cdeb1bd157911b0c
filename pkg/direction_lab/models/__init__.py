from .base import TrainedModel, predict, predict_proba
from .forest import ForestModel, RfParams, train_rf
from .logistic import LogisticModel, LrParams, train_lr
from .mlp import MlpModel, MlpParams, train_mlp
from .naive_bayes import NaiveBayesModel, NbParams, train_nb
from .serialization import load_model, save_model
from .svm import Kernel, SvmModel, SvmParams, train_smo

__all__ = [
    "TrainedModel", "predict", "predict_proba",
    "ForestModel", "RfParams", "train_rf",
    "LogisticModel", "LrParams", "train_lr",
    "MlpModel", "MlpParams", "train_mlp",
    "NaiveBayesModel", "NbParams", "train_nb",
    "Kernel", "SvmModel", "SvmParams", "train_smo",
    "load_model", "save_model",
]
