from .adam import Adam
from .models import CnnClassifier, MlpClassifier, N_CLASSES

__all__ = ["Adam", "MlpClassifier", "CnnClassifier", "N_CLASSES"]
