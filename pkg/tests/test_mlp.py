import math

import numpy as np
import pytest

from spamlab import mlp
from spamlab.errors import BadDimensions, DimensionMismatch, EmptyData
from spamlab.mlp import MLPConfig, MLPModel

XOR_X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
XOR_Y = np.array([0, 1, 1, 0], dtype=float)
# the shipped XOR fixture configuration
XOR_CONFIG = MLPConfig(2, hidden_dims=(8,), learning_rate=0.5, epochs=2000, batch_size=4, seed=0)


def ones_model(activation="sigmoid"):
    cfg = MLPConfig(1, hidden_dims=(1,), hidden_activation=activation)
    return MLPModel([np.ones((1, 1)), np.ones((1, 1))], [np.zeros(1), np.zeros(1)], cfg)


def zero_model(input_dim=3, hidden=(4,)):
    m = mlp.init(MLPConfig(input_dim, hidden_dims=hidden))
    for p in m.parameters():
        p[...] = 0.0
    return m


def test_init_shapes_and_determinism():
    cfg = MLPConfig(3, hidden_dims=(4,), seed=11)
    a, b = mlp.init(cfg), mlp.init(cfg)
    assert [W.shape for W in a.weights] == [(4, 3), (1, 4)]
    for p, q in zip(a.parameters(), b.parameters()):
        assert p.tobytes() == q.tobytes()
    c = mlp.init(MLPConfig(3, hidden_dims=(4,), seed=12))
    assert not np.array_equal(a.weights[0], c.weights[0])
    assert all(np.all(bias == 0) for bias in a.biases)
    s = math.sqrt(6 / 7)
    assert np.all(np.abs(a.weights[0]) <= s)


def test_bad_config():
    with pytest.raises(BadDimensions):
        MLPConfig(0)
    with pytest.raises(BadDimensions):
        MLPConfig(3, hidden_dims=(0,))
    with pytest.raises(BadDimensions):
        MLPConfig(3, learning_rate=0)


def test_forward_examples():
    assert mlp.forward(zero_model(), [1.0, -2.0, 3.0]) == 0.5
    assert math.isclose(mlp.forward(ones_model(), [0.0]), 1 / (1 + math.exp(-0.5)), abs_tol=1e-12)
    assert round(mlp.forward(ones_model(), [0.0]), 5) == 0.62246
    with pytest.raises(DimensionMismatch):
        mlp.forward(zero_model(), [1.0, 2.0])


def test_forward_range_extremes():
    m = mlp.init(MLPConfig(2, hidden_dims=(3,), seed=1))
    for x in ([1e300, -1e300], [-1e6, 1e6], [0.0, 0.0]):
        p = mlp.forward(m, x)
        assert 0 < p < 1


def test_loss_examples():
    assert math.isclose(mlp.loss(0.5, 1), math.log(2), abs_tol=1e-12)
    assert round(mlp.loss(0.5, 1), 5) == 0.69315
    assert math.isclose(mlp.loss(0.9, 0), -math.log(0.1), abs_tol=1e-12)
    assert round(mlp.loss(0.9, 0), 5) == 2.30259
    assert mlp.loss(1.0, 1) < 1e-11
    assert mlp.loss(0.0, 0) < 1e-11
    assert math.isclose(mlp.loss(0.0, 1), -math.log(1e-12))


def test_zero_input_zero_weights_gradients():
    m = zero_model()
    grads = mlp.backward(m, np.zeros(3), 1)
    assert np.all(grads[0] == 0)
    assert mlp.backward(m, np.zeros(3), 1)[1].tolist() == grads[1].tolist()


def test_backward_is_pure():
    m = mlp.init(MLPConfig(5, hidden_dims=(3,), seed=4))
    x = np.linspace(-1, 1, 5)
    g1 = mlp.backward(m, x, 1)
    g2 = mlp.backward(m, x, 1)
    assert all(a.tobytes() == b.tobytes() for a, b in zip(g1, g2))


@pytest.mark.parametrize("activation", ["sigmoid", "relu"])
def test_gradient_check_twenty_pairs(activation):
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        cfg = MLPConfig(5, hidden_dims=(3,), hidden_activation=activation, seed=seed)
        m = mlp.init(cfg)
        for p in m.biases:
            p[...] = rng.normal(scale=0.1, size=p.shape)
        x = rng.normal(size=5)
        worst = max(worst, mlp.gradient_check(m, x, seed % 2))
    assert worst < 1e-4


def test_gradient_check_deeper_net():
    m = mlp.init(MLPConfig(4, hidden_dims=(5, 3), seed=9))
    assert mlp.gradient_check(m, np.array([0.5, -1.0, 2.0, 0.0]), 0) < 1e-4


def test_gradient_check_logistic_case():
    m = mlp.init(MLPConfig(1, hidden_dims=(), seed=2))
    assert mlp.gradient_check(m, np.array([0.7]), 1) < 1e-8


def test_gradient_check_eps():
    with pytest.raises(ValueError):
        mlp.gradient_check(zero_model(), np.zeros(3), 1, eps=0)


def test_epochs_zero_is_init():
    cfg = MLPConfig(2, hidden_dims=(3,), epochs=0, seed=5)
    model, report = mlp.train(XOR_X, XOR_Y, cfg)
    ref = mlp.init(cfg)
    assert all(p.tobytes() == q.tobytes() for p, q in zip(model.parameters(), ref.parameters()))
    assert report.epochs == 0 and report.epoch_losses == []


def test_train_errors():
    with pytest.raises(EmptyData):
        mlp.train(np.zeros((0, 2)), np.zeros(0), MLPConfig(2))
    with pytest.raises(DimensionMismatch):
        mlp.train(XOR_X, XOR_Y[:3], MLPConfig(2))
    with pytest.raises(DimensionMismatch):
        mlp.train(XOR_X, XOR_Y, MLPConfig(3))


@pytest.mark.parametrize("lr", [0.01, 0.05, 0.1])
def test_single_example_loss_non_increasing(lr):
    x = np.array([[0.3, -1.2, 2.0]])
    cfg = MLPConfig(3, hidden_dims=(4,), learning_rate=lr, epochs=200, batch_size=1, seed=3)
    _, report = mlp.train(x, np.array([1.0]), cfg)
    losses = report.epoch_losses
    assert all(b <= a for a, b in zip(losses, losses[1:]))
    assert all(math.isfinite(v) and v >= 0 for v in losses)


def test_training_deterministic():
    cfg = MLPConfig(2, hidden_dims=(4,), epochs=50, batch_size=3, seed=8)
    m1, r1 = mlp.train(XOR_X, XOR_Y, cfg)
    m2, r2 = mlp.train(XOR_X, XOR_Y, cfg)
    assert all(p.tobytes() == q.tobytes() for p, q in zip(m1.parameters(), m2.parameters()))
    assert r1.epoch_losses == r2.epoch_losses


def test_xor_fixture():
    model, report = mlp.train(XOR_X, XOR_Y, XOR_CONFIG)
    assert report.epochs <= 2000
    assert mlp.predict_batch(model, XOR_X).tolist() == [0, 1, 1, 0]
    assert [mlp.predict(model, x) for x in XOR_X] == [0, 1, 1, 0]


def test_predict_threshold():
    assert mlp.predict(zero_model(), np.zeros(3)) == 1
    m = zero_model()
    m.biases[-1][0] = math.log(0.49999 / 0.50001)
    assert mlp.forward(m, np.zeros(3)) < 0.5
    assert mlp.predict(m, np.zeros(3)) == 0
