"""Deep CCA multimodal fusion toolkit.

Submodules:
    numerics          shared linear-algebra substrate and seeded random streams
    cca               classical linear CCA
    neuralnet         minimal dense feedforward engine with manual backprop
    dcca              CCA-constrained two-tower training and weighted-sum fusion
    fusion_baselines  concatenation, MAX, and Choquet fuzzy-integral fusion
    bdae              bimodal deep autoencoder built from Bernoulli RBMs
    mine              Donsker-Varadhan mutual-information estimator
    features          band-power differential entropy and statistical features
    classifier        linear one-vs-rest SVM
    synthdata         synthetic two-modality dataset generator
    harness           splits, noise schemes, experiments, grid search, sweeps
    cli               command-line frontend
"""

__version__ = "0.1.0"
