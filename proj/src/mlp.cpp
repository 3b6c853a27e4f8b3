#include "dra/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dra/errors.hpp"
#include "dra/rng.hpp"

namespace dra {

namespace {
constexpr double kEps = 1e-7;  // probability clamp for cross-entropy

double clamp_p(double p) { return std::clamp(p, kEps, 1.0 - kEps); }
}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("training epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (!(learning_rate > 0.0))
    throw ConfigError("learning rate must be positive");
  if (early_stop_patience < 1)
    throw ConfigError("early-stop patience must be at least 1");
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw ConfigError("classification threshold must lie in (0, 1)");
  if (hidden_dims.empty())
    throw ConfigError("at least one hidden layer is required");
  for (int h : hidden_dims)
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& c) {
  TrainConfig tc;
  tc.epochs = c.get_int("train_epochs", tc.epochs);
  tc.batch_size = c.get_int("train_batch", tc.batch_size);
  tc.learning_rate = c.get_double("train_lr", tc.learning_rate);
  const std::string opt = c.get_string("train_optimizer", "adam");
  if (opt == "adam")
    tc.optimizer = Optimizer::Adam;
  else if (opt == "sgd")
    tc.optimizer = Optimizer::Sgd;
  else
    throw ConfigError("train_optimizer must be 'adam' or 'sgd', got '" + opt +
                      "'");
  tc.early_stop_patience = c.get_int("train_patience", tc.early_stop_patience);
  tc.rng_seed = c.get_u64("train_seed", tc.rng_seed);
  tc.threshold = c.get_double("train_threshold", tc.threshold);
  const std::string hidden = c.get_string("train_hidden", "");
  if (!hidden.empty()) {
    tc.hidden_dims.clear();
    std::size_t start = 0;
    while (start <= hidden.size()) {
      const std::size_t comma = hidden.find(',', start);
      const std::string tok =
          hidden.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
      char* end = nullptr;
      const long v = std::strtol(tok.c_str(), &end, 10);
      if (end != tok.c_str() + tok.size() || v < 1)
        throw ConfigError("train_hidden: bad layer size '" + tok + "'");
      tc.hidden_dims.push_back(static_cast<int>(v));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  tc.validate();
  return tc;
}

MlpModel MlpModel::create(const std::vector<int>& dims, OutputKind kind,
                          std::uint64_t seed) {
  if (dims.size() < 2)
    throw ConfigError("a network needs at least input and output dimensions");
  for (int d : dims)
    if (d < 1) throw ConfigError("network layer sizes must be positive");
  MlpModel m;
  m.dims_ = dims;
  m.kind_ = kind;
  Rng rng(Rng::mix(seed, 0xC0DEull));
  m.layers_.resize(dims.size() - 1);
  for (std::size_t l = 0; l < m.layers_.size(); ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    auto& layer = m.layers_[l];
    layer.w.resize(static_cast<std::size_t>(out) * in);
    layer.b.assign(static_cast<std::size_t>(out), 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    for (auto& v : layer.w) v = rng.uniform(-1.0, 1.0) * scale;
  }
  return m;
}

int MlpModel::input_dim() const { return dims_.empty() ? 0 : dims_.front(); }
int MlpModel::output_dim() const { return dims_.empty() ? 0 : dims_.back(); }

std::vector<double>& MlpModel::weights(int layer) { return layers_.at(layer).w; }
std::vector<double>& MlpModel::bias(int layer) { return layers_.at(layer).b; }
const std::vector<double>& MlpModel::weights(int layer) const {
  return layers_.at(layer).w;
}
const std::vector<double>& MlpModel::bias(int layer) const {
  return layers_.at(layer).b;
}

namespace {

void check_finite(const std::vector<double>& v, int layer) {
  double s = 0.0;
  for (double x : v) s += x;
  if (!std::isfinite(s))
    throw NumericError("non-finite activation in layer " +
                       std::to_string(layer));
}

void apply_output(std::vector<double>& z, OutputKind kind) {
  if (kind == OutputKind::Logistic) {
    for (auto& v : z) v = 1.0 / (1.0 + std::exp(-v));
  } else {
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    double sum = 0.0;
    for (auto& v : z) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (auto& v : z) v /= sum;
  }
}

}  // namespace

std::vector<double> MlpModel::forward(const std::vector<double>& x) const {
  if (!trained()) throw DataError("network used before initialization");
  if (static_cast<int>(x.size()) != input_dim())
    throw DataError("network input has " + std::to_string(x.size()) +
                    " features, expected " + std::to_string(input_dim()));
  for (double v : x)
    if (!std::isfinite(v)) throw DataError("non-finite network input");
  std::vector<double> a = x;
  std::vector<double> z;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const auto& layer = layers_[l];
    z.assign(static_cast<std::size_t>(out), 0.0);
    for (int o = 0; o < out; ++o) {
      const double* wr = &layer.w[static_cast<std::size_t>(o) * in];
      double acc = layer.b[o];
      for (int i = 0; i < in; ++i) acc += wr[i] * a[i];
      z[o] = acc;
    }
    check_finite(z, static_cast<int>(l));
    if (l + 1 < layers_.size()) {
      for (auto& v : z) v = std::max(0.0, v);
    } else {
      apply_output(z, kind_);
    }
    a = std::move(z);
  }
  return a;
}

double bce_loss(const std::vector<double>& predictions,
                const std::vector<double>& labels) {
  if (predictions.size() != labels.size() || predictions.empty())
    throw DataError("loss requires equal-length nonempty vectors");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double p = clamp_p(predictions[i]);
    const double y = labels[i];
    s -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return s / static_cast<double>(predictions.size());
}

namespace {

// Forward over a batch, keeping post-activation values per layer.
// acts[0] = inputs, acts[l+1] = activations after layer l.
void batch_forward(const MlpModel& m, const std::vector<int>& dims,
                   OutputKind kind,
                   const std::vector<std::vector<double>>& X,
                   std::vector<std::vector<double>>& acts) {
  const std::size_t B = X.size();
  const int L = m.layer_count();
  acts.assign(static_cast<std::size_t>(L) + 1, {});
  acts[0].resize(B * dims[0]);
  for (std::size_t r = 0; r < B; ++r) {
    if (static_cast<int>(X[r].size()) != dims[0])
      throw DataError("batch row has wrong feature count");
    std::copy(X[r].begin(), X[r].end(), acts[0].begin() + r * dims[0]);
  }
  for (int l = 0; l < L; ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    const auto& w = m.weights(l);
    const auto& b = m.bias(l);
    auto& dst = acts[l + 1];
    dst.assign(B * static_cast<std::size_t>(out), 0.0);
    for (std::size_t r = 0; r < B; ++r) {
      const double* av = &acts[l][r * in];
      double* zv = &dst[r * out];
      for (int o = 0; o < out; ++o) {
        const double* wr = &w[static_cast<std::size_t>(o) * in];
        double acc = b[o];
        for (int i = 0; i < in; ++i) acc += wr[i] * av[i];
        zv[o] = acc;
      }
      if (l + 1 < L) {
        for (int o = 0; o < out; ++o) zv[o] = std::max(0.0, zv[o]);
      } else {
        std::vector<double> zr(zv, zv + out);
        apply_output(zr, kind);
        std::copy(zr.begin(), zr.end(), zv);
      }
    }
    check_finite(dst, l);
  }
}

double batch_loss(OutputKind kind, const std::vector<double>& probs,
                  const std::vector<std::vector<double>>& Y, int out) {
  const std::size_t B = Y.size();
  double s = 0.0;
  for (std::size_t r = 0; r < B; ++r) {
    if (static_cast<int>(Y[r].size()) != out)
      throw DataError("label row has wrong length");
    const double* p = &probs[r * out];
    for (int o = 0; o < out; ++o) {
      const double pc = clamp_p(p[o]);
      if (kind == OutputKind::Logistic) {
        s -= Y[r][o] * std::log(pc) + (1.0 - Y[r][o]) * std::log(1.0 - pc);
      } else {
        if (Y[r][o] != 0.0) s -= Y[r][o] * std::log(pc);
      }
    }
  }
  const double denom = (kind == OutputKind::Logistic)
                           ? static_cast<double>(B) * out
                           : static_cast<double>(B);
  return s / denom;
}

}  // namespace

double MlpModel::loss(const std::vector<std::vector<double>>& X,
                      const std::vector<std::vector<double>>& Y) const {
  if (!trained()) throw DataError("network used before initialization");
  if (X.empty() || X.size() != Y.size())
    throw DataError("loss requires matching nonempty batches");
  std::vector<std::vector<double>> acts;
  batch_forward(*this, dims_, kind_, X, acts);
  return batch_loss(kind_, acts.back(), Y, output_dim());
}

double MlpModel::loss_and_gradients(const std::vector<std::vector<double>>& X,
                                    const std::vector<std::vector<double>>& Y,
                                    std::vector<std::vector<double>>& grad_w,
                                    std::vector<std::vector<double>>& grad_b) const {
  if (!trained()) throw DataError("network used before initialization");
  if (X.empty() || X.size() != Y.size())
    throw DataError("gradients require matching nonempty batches");
  const int L = layer_count();
  const std::size_t B = X.size();
  std::vector<std::vector<double>> acts;
  batch_forward(*this, dims_, kind_, X, acts);
  const double total = batch_loss(kind_, acts.back(), Y, output_dim());

  grad_w.assign(static_cast<std::size_t>(L), {});
  grad_b.assign(static_cast<std::size_t>(L), {});
  for (int l = 0; l < L; ++l) {
    grad_w[l].assign(layers_[l].w.size(), 0.0);
    grad_b[l].assign(layers_[l].b.size(), 0.0);
  }

  // Cross-entropy against its matched output nonlinearity gives
  // d(loss)/d(pre-activation) = (p - y) / normalizer at the output layer.
  const int out_dim = dims_.back();
  const double denom = (kind_ == OutputKind::Logistic)
                           ? static_cast<double>(B) * out_dim
                           : static_cast<double>(B);
  std::vector<double> delta(B * static_cast<std::size_t>(out_dim));
  for (std::size_t r = 0; r < B; ++r)
    for (int o = 0; o < out_dim; ++o)
      delta[r * out_dim + o] =
          (acts.back()[r * out_dim + o] - Y[r][o]) / denom;

  for (int l = L - 1; l >= 0; --l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    auto& gw = grad_w[l];
    auto& gb = grad_b[l];
    for (std::size_t r = 0; r < B; ++r) {
      const double* av = &acts[l][r * in];
      const double* dv = &delta[r * out];
      for (int o = 0; o < out; ++o) {
        const double d = dv[o];
        if (d == 0.0) continue;
        gb[o] += d;
        double* gwr = &gw[static_cast<std::size_t>(o) * in];
        for (int i = 0; i < in; ++i) gwr[i] += d * av[i];
      }
    }
    check_finite(gw, l);
    if (l == 0) break;
    // Propagate through the rectifier of the previous layer.
    std::vector<double> prev(B * static_cast<std::size_t>(in), 0.0);
    const auto& w = layers_[l].w;
    for (std::size_t r = 0; r < B; ++r) {
      const double* dv = &delta[r * out];
      const double* av = &acts[l][r * in];
      double* pv = &prev[r * in];
      for (int o = 0; o < out; ++o) {
        const double d = dv[o];
        if (d == 0.0) continue;
        const double* wr = &w[static_cast<std::size_t>(o) * in];
        for (int i = 0; i < in; ++i) pv[i] += d * wr[i];
      }
      for (int i = 0; i < in; ++i)
        if (av[i] <= 0.0) pv[i] = 0.0;  // rectifier gate
    }
    delta = std::move(prev);
  }
  return total;
}

TrainOutcome train_network(const std::vector<std::vector<double>>& X,
                           const std::vector<std::vector<double>>& Y,
                           const std::vector<std::vector<double>>& Xval,
                           const std::vector<std::vector<double>>& Yval,
                           OutputKind kind, const TrainConfig& tc) {
  tc.validate();
  if (X.empty() || X.size() != Y.size())
    throw DataError("training requires matching nonempty feature/label sets");
  if (Xval.size() != Yval.size())
    throw DataError("validation features and labels differ in length");
  std::vector<int> dims;
  dims.push_back(static_cast<int>(X[0].size()));
  for (int h : tc.hidden_dims) dims.push_back(h);
  dims.push_back(static_cast<int>(Y[0].size()));

  MlpModel model = MlpModel::create(dims, kind, tc.rng_seed);
  model.threshold = tc.threshold;
  const int L = model.layer_count();

  // Adaptive-moment state.
  std::vector<std::vector<double>> mw(L), vw(L), mb(L), vb(L);
  for (int l = 0; l < L; ++l) {
    mw[l].assign(model.weights(l).size(), 0.0);
    vw[l].assign(model.weights(l).size(), 0.0);
    mb[l].assign(model.bias(l).size(), 0.0);
    vb[l].assign(model.bias(l).size(), 0.0);
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
  long step = 0;

  TrainOutcome outcome;
  outcome.best_val_loss = std::numeric_limits<double>::infinity();
  MlpModel best = model;
  int stall = 0;

  std::vector<std::size_t> order(X.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::vector<double>> gw, gb;
  std::vector<std::vector<double>> Xb, Yb;

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    Rng rng(Rng::mix(tc.rng_seed, 0xE70C000ull + epoch));
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(tc.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(tc.batch_size));
      Xb.clear();
      Yb.clear();
      for (std::size_t i = start; i < stop; ++i) {
        Xb.push_back(X[order[i]]);
        Yb.push_back(Y[order[i]]);
      }
      const double batch = model.loss_and_gradients(Xb, Yb, gw, gb);
      if (!std::isfinite(batch))
        throw NumericError(
            "training diverged (non-finite loss); lower the learning rate");
      epoch_loss += batch;
      ++batches;
      ++step;
      for (int l = 0; l < L; ++l) {
        auto update = [&](std::vector<double>& p, std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v) {
          if (tc.optimizer == Optimizer::Sgd) {
            for (std::size_t i = 0; i < p.size(); ++i)
              p[i] -= tc.learning_rate * g[i];
            return;
          }
          const double c1 = 1.0 - std::pow(kBeta1, double(step));
          const double c2 = 1.0 - std::pow(kBeta2, double(step));
          for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
            v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
            p[i] -= tc.learning_rate * (m[i] / c1) /
                    (std::sqrt(v[i] / c2) + kAdamEps);
          }
        };
        update(model.weights(l), gw[l], mw[l], vw[l]);
        update(model.bias(l), gb[l], mb[l], vb[l]);
      }
    }
    const double train_loss = epoch_loss / double(batches);
    const double val_loss =
        Xval.empty() ? train_loss : model.loss(Xval, Yval);
    outcome.curve.push_back({epoch, train_loss, val_loss});
    if (val_loss < outcome.best_val_loss - 1e-12) {
      outcome.best_val_loss = val_loss;
      outcome.best_epoch = epoch;
      best = model;
      stall = 0;
    } else {
      ++stall;
    }
    if (stall >= tc.early_stop_patience) break;
  }
  outcome.model = std::move(best);
  return outcome;
}

TrainOutcome train_mlp(const Dataset& ds, const TrainConfig& tc) {
  tc.validate();
  const auto train_ix = ds.split_indices(Split::Train);
  if (train_ix.empty())
    throw DataError("training requires a nonempty train split");
  const FeatureScaler scaler = FeatureScaler::fit_split(ds, Split::Train);

  const std::size_t nbits = ds.samples[train_ix[0]].quadrant_bits.size();
  const auto rows_for = [&](Split split, std::vector<std::vector<double>>& Xo,
                            std::vector<std::vector<double>>& Yo) {
    for (std::size_t ix : ds.split_indices(split)) {
      const auto& s = ds.samples[ix];
      if (s.quadrant_bits.size() != nbits)
        throw DataError("dataset has inconsistent weight-bit lengths");
      const auto f = scaler.transform(s.spec.to_features());
      Xo.emplace_back(f.begin(), f.end());
      std::vector<double> y(nbits);
      for (std::size_t i = 0; i < nbits; ++i) y[i] = s.quadrant_bits[i];
      Yo.push_back(std::move(y));
    }
  };
  std::vector<std::vector<double>> X, Y, Xv, Yv;
  rows_for(Split::Train, X, Y);
  rows_for(Split::Validation, Xv, Yv);

  TrainOutcome out = train_network(X, Y, Xv, Yv, OutputKind::Logistic, tc);
  out.model.scaler = scaler;
  return out;
}

std::string curve_to_csv(const std::vector<TrainCurvePoint>& curve) {
  std::string s = "epoch,train_loss,val_loss\n";
  for (const auto& p : curve) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g\n", p.epoch, p.train_loss,
                  p.val_loss);
    s += buf;
  }
  return s;
}

}  // namespace dra
