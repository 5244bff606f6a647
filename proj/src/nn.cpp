#include "nlos/nn.hpp"

#include <algorithm>
#include <cmath>

namespace nlos::nn {

using nlohmann::json;

LayerSpec LayerSpec::conv(int in_ch, int out_ch, int k, int stride, int pad) {
  LayerSpec s;
  s.kind = "conv";
  s.in_ch = in_ch;
  s.out_ch = out_ch;
  s.k = k;
  s.stride = stride;
  s.pad = pad;
  return s;
}

LayerSpec LayerSpec::deconv(int in_ch, int out_ch, int k, int stride, int pad) {
  LayerSpec s = conv(in_ch, out_ch, k, stride, pad);
  s.kind = "deconv";
  return s;
}

LayerSpec LayerSpec::linear(int in, int out) {
  LayerSpec s;
  s.kind = "linear";
  s.in = in;
  s.out = out;
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = "relu";
  return s;
}

LayerSpec LayerSpec::sigmoid() {
  LayerSpec s;
  s.kind = "sigmoid";
  return s;
}

LayerSpec LayerSpec::reshape(std::vector<int> target) {
  LayerSpec s;
  s.kind = "reshape";
  s.target = std::move(target);
  return s;
}

json LayerSpec::to_json() const {
  json j;
  j["kind"] = kind;
  if (kind == "conv" || kind == "deconv") {
    j["in_ch"] = in_ch;
    j["out_ch"] = out_ch;
    j["k"] = k;
    j["stride"] = stride;
    j["pad"] = pad;
  } else if (kind == "linear") {
    j["in"] = in;
    j["out"] = out;
  } else if (kind == "reshape") {
    j["target"] = target;
  }
  return j;
}

LayerSpec LayerSpec::from_json(const json& j) {
  LayerSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (s.kind == "conv" || s.kind == "deconv") {
    s.in_ch = j.at("in_ch").get<int>();
    s.out_ch = j.at("out_ch").get<int>();
    s.k = j.at("k").get<int>();
    s.stride = j.at("stride").get<int>();
    s.pad = j.at("pad").get<int>();
  } else if (s.kind == "linear") {
    s.in = j.at("in").get<int>();
    s.out = j.at("out").get<int>();
  } else if (s.kind == "reshape") {
    s.target = j.at("target").get<std::vector<int>>();
  } else if (s.kind != "relu" && s.kind != "sigmoid") {
    throw ContractError("unknown layer kind: " + s.kind);
  }
  return s;
}

namespace {

void uniform_fan_in(double* p, std::size_t n, int fan_in, Rng& rng) {
  const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(-a, a);
}

class Conv2d final : public Layer {
 public:
  explicit Conv2d(const LayerSpec& s) : s_(s) {
    require(s.in_ch >= 1 && s.out_ch >= 1 && s.k >= 1 && s.stride >= 1 && s.pad >= 0,
            "conv: bad spec");
  }

  LayerSpec spec() const override { return s_; }

  std::vector<int> out_shape(const std::vector<int>& in) const override {
    require(in.size() == 3 && in[0] == s_.in_ch, "conv: input must be [in_ch,H,W]");
    const int oh = (in[1] + 2 * s_.pad - s_.k) / s_.stride + 1;
    const int ow = (in[2] + 2 * s_.pad - s_.k) / s_.stride + 1;
    require(oh >= 1 && ow >= 1, "conv: output collapses to zero size");
    return {s_.out_ch, oh, ow};
  }

  std::size_t param_count() const override {
    return static_cast<std::size_t>(s_.out_ch) * s_.in_ch * s_.k * s_.k + s_.out_ch;
  }

  void init_params(double* p, Rng& rng) const override {
    const std::size_t nw = param_count() - s_.out_ch;
    uniform_fan_in(p, nw, s_.in_ch * s_.k * s_.k, rng);
    std::fill(p + nw, p + param_count(), 0.0);
  }

  Tensor forward(const Tensor& x, const double* p) const override {
    const int H = x.dim(1), W = x.dim(2);
    Tensor y(out_shape(x.shape));
    const int OH = y.dim(1), OW = y.dim(2);
    const double* bias = p + static_cast<std::size_t>(s_.out_ch) * s_.in_ch * s_.k * s_.k;
    for (int oc = 0; oc < s_.out_ch; ++oc) {
      double* yc = y.v.data() + static_cast<std::size_t>(oc) * OH * OW;
      std::fill(yc, yc + static_cast<std::size_t>(OH) * OW, bias[oc]);
    }
    for (int oc = 0; oc < s_.out_ch; ++oc) {
      for (int ic = 0; ic < s_.in_ch; ++ic) {
        const double* xc = x.v.data() + static_cast<std::size_t>(ic) * H * W;
        double* yc = y.v.data() + static_cast<std::size_t>(oc) * OH * OW;
        for (int ky = 0; ky < s_.k; ++ky) {
          for (int kx = 0; kx < s_.k; ++kx) {
            const double w = p[((static_cast<std::size_t>(oc) * s_.in_ch + ic) * s_.k + ky) * s_.k + kx];
            for (int oy = 0; oy < OH; ++oy) {
              const int iy = oy * s_.stride - s_.pad + ky;
              if (iy < 0 || iy >= H) continue;
              const double* xrow = xc + static_cast<std::size_t>(iy) * W;
              double* yrow = yc + static_cast<std::size_t>(oy) * OW;
              for (int ox = 0; ox < OW; ++ox) {
                const int ix = ox * s_.stride - s_.pad + kx;
                if (ix < 0 || ix >= W) continue;
                yrow[ox] += w * xrow[ix];
              }
            }
          }
        }
      }
    }
    return y;
  }

  Tensor backward(const Tensor& x, const Tensor& /*y*/, const Tensor& dy,
                  const double* p, double* g) const override {
    const int H = x.dim(1), W = x.dim(2);
    const int OH = dy.dim(1), OW = dy.dim(2);
    Tensor dx(x.shape);
    const std::size_t nw = static_cast<std::size_t>(s_.out_ch) * s_.in_ch * s_.k * s_.k;
    for (int oc = 0; oc < s_.out_ch; ++oc) {
      const double* dyc = dy.v.data() + static_cast<std::size_t>(oc) * OH * OW;
      double acc = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(OH) * OW; ++i) acc += dyc[i];
      g[nw + oc] += acc;
    }
    for (int oc = 0; oc < s_.out_ch; ++oc) {
      for (int ic = 0; ic < s_.in_ch; ++ic) {
        const double* xc = x.v.data() + static_cast<std::size_t>(ic) * H * W;
        double* dxc = dx.v.data() + static_cast<std::size_t>(ic) * H * W;
        const double* dyc = dy.v.data() + static_cast<std::size_t>(oc) * OH * OW;
        for (int ky = 0; ky < s_.k; ++ky) {
          for (int kx = 0; kx < s_.k; ++kx) {
            const std::size_t widx =
                ((static_cast<std::size_t>(oc) * s_.in_ch + ic) * s_.k + ky) * s_.k + kx;
            const double w = p[widx];
            double dw = 0.0;
            for (int oy = 0; oy < OH; ++oy) {
              const int iy = oy * s_.stride - s_.pad + ky;
              if (iy < 0 || iy >= H) continue;
              const double* xrow = xc + static_cast<std::size_t>(iy) * W;
              double* dxrow = dxc + static_cast<std::size_t>(iy) * W;
              const double* dyrow = dyc + static_cast<std::size_t>(oy) * OW;
              for (int ox = 0; ox < OW; ++ox) {
                const int ix = ox * s_.stride - s_.pad + kx;
                if (ix < 0 || ix >= W) continue;
                const double d = dyrow[ox];
                dw += d * xrow[ix];
                dxrow[ix] += w * d;
              }
            }
            g[widx] += dw;
          }
        }
      }
    }
    return dx;
  }

 private:
  LayerSpec s_;
};

class ConvTranspose2d final : public Layer {
 public:
  explicit ConvTranspose2d(const LayerSpec& s) : s_(s) {
    require(s.in_ch >= 1 && s.out_ch >= 1 && s.k >= 1 && s.stride >= 1 && s.pad >= 0,
            "deconv: bad spec");
  }

  LayerSpec spec() const override { return s_; }

  std::vector<int> out_shape(const std::vector<int>& in) const override {
    require(in.size() == 3 && in[0] == s_.in_ch, "deconv: input must be [in_ch,H,W]");
    const int oh = (in[1] - 1) * s_.stride - 2 * s_.pad + s_.k;
    const int ow = (in[2] - 1) * s_.stride - 2 * s_.pad + s_.k;
    require(oh >= 1 && ow >= 1, "deconv: output collapses to zero size");
    return {s_.out_ch, oh, ow};
  }

  std::size_t param_count() const override {
    return static_cast<std::size_t>(s_.in_ch) * s_.out_ch * s_.k * s_.k + s_.out_ch;
  }

  void init_params(double* p, Rng& rng) const override {
    const std::size_t nw = param_count() - s_.out_ch;
    uniform_fan_in(p, nw, s_.in_ch * s_.k * s_.k, rng);
    std::fill(p + nw, p + param_count(), 0.0);
  }

  Tensor forward(const Tensor& x, const double* p) const override {
    const int H = x.dim(1), W = x.dim(2);
    Tensor y(out_shape(x.shape));
    const int OH = y.dim(1), OW = y.dim(2);
    const double* bias = p + static_cast<std::size_t>(s_.in_ch) * s_.out_ch * s_.k * s_.k;
    for (int oc = 0; oc < s_.out_ch; ++oc) {
      double* yc = y.v.data() + static_cast<std::size_t>(oc) * OH * OW;
      std::fill(yc, yc + static_cast<std::size_t>(OH) * OW, bias[oc]);
    }
    for (int ic = 0; ic < s_.in_ch; ++ic) {
      const double* xc = x.v.data() + static_cast<std::size_t>(ic) * H * W;
      for (int oc = 0; oc < s_.out_ch; ++oc) {
        double* yc = y.v.data() + static_cast<std::size_t>(oc) * OH * OW;
        for (int ky = 0; ky < s_.k; ++ky) {
          for (int kx = 0; kx < s_.k; ++kx) {
            const double w = p[((static_cast<std::size_t>(ic) * s_.out_ch + oc) * s_.k + ky) * s_.k + kx];
            for (int iy = 0; iy < H; ++iy) {
              const int oy = iy * s_.stride - s_.pad + ky;
              if (oy < 0 || oy >= OH) continue;
              const double* xrow = xc + static_cast<std::size_t>(iy) * W;
              double* yrow = yc + static_cast<std::size_t>(oy) * OW;
              for (int ix = 0; ix < W; ++ix) {
                const int ox = ix * s_.stride - s_.pad + kx;
                if (ox < 0 || ox >= OW) continue;
                yrow[ox] += w * xrow[ix];
              }
            }
          }
        }
      }
    }
    return y;
  }

  Tensor backward(const Tensor& x, const Tensor& /*y*/, const Tensor& dy,
                  const double* p, double* g) const override {
    const int H = x.dim(1), W = x.dim(2);
    const int OH = dy.dim(1), OW = dy.dim(2);
    Tensor dx(x.shape);
    const std::size_t nw = static_cast<std::size_t>(s_.in_ch) * s_.out_ch * s_.k * s_.k;
    for (int oc = 0; oc < s_.out_ch; ++oc) {
      const double* dyc = dy.v.data() + static_cast<std::size_t>(oc) * OH * OW;
      double acc = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(OH) * OW; ++i) acc += dyc[i];
      g[nw + oc] += acc;
    }
    for (int ic = 0; ic < s_.in_ch; ++ic) {
      const double* xc = x.v.data() + static_cast<std::size_t>(ic) * H * W;
      double* dxc = dx.v.data() + static_cast<std::size_t>(ic) * H * W;
      for (int oc = 0; oc < s_.out_ch; ++oc) {
        const double* dyc = dy.v.data() + static_cast<std::size_t>(oc) * OH * OW;
        for (int ky = 0; ky < s_.k; ++ky) {
          for (int kx = 0; kx < s_.k; ++kx) {
            const std::size_t widx =
                ((static_cast<std::size_t>(ic) * s_.out_ch + oc) * s_.k + ky) * s_.k + kx;
            const double w = p[widx];
            double dw = 0.0;
            for (int iy = 0; iy < H; ++iy) {
              const int oy = iy * s_.stride - s_.pad + ky;
              if (oy < 0 || oy >= OH) continue;
              const double* xrow = xc + static_cast<std::size_t>(iy) * W;
              double* dxrow = dxc + static_cast<std::size_t>(iy) * W;
              const double* dyrow = dyc + static_cast<std::size_t>(oy) * OW;
              for (int ix = 0; ix < W; ++ix) {
                const int ox = ix * s_.stride - s_.pad + kx;
                if (ox < 0 || ox >= OW) continue;
                const double d = dyrow[ox];
                dw += d * xrow[ix];
                dxrow[ix] += w * d;
              }
            }
            g[widx] += dw;
          }
        }
      }
    }
    return dx;
  }

 private:
  LayerSpec s_;
};

class Linear final : public Layer {
 public:
  explicit Linear(const LayerSpec& s) : s_(s) {
    require(s.in >= 1 && s.out >= 1, "linear: bad spec");
  }

  LayerSpec spec() const override { return s_; }

  std::vector<int> out_shape(const std::vector<int>& in) const override {
    require(Tensor::numel_of(in) == s_.in, "linear: input size mismatch");
    return {s_.out};
  }

  std::size_t param_count() const override {
    return static_cast<std::size_t>(s_.out) * s_.in + s_.out;
  }

  void init_params(double* p, Rng& rng) const override {
    const std::size_t nw = static_cast<std::size_t>(s_.out) * s_.in;
    uniform_fan_in(p, nw, s_.in, rng);
    std::fill(p + nw, p + param_count(), 0.0);
  }

  Tensor forward(const Tensor& x, const double* p) const override {
    require(static_cast<int>(x.numel()) == s_.in, "linear: input size mismatch");
    Tensor y({s_.out});
    const double* bias = p + static_cast<std::size_t>(s_.out) * s_.in;
    for (int o = 0; o < s_.out; ++o) {
      const double* row = p + static_cast<std::size_t>(o) * s_.in;
      double acc = bias[o];
      for (int i = 0; i < s_.in; ++i) acc += row[i] * x.v[i];
      y.v[o] = acc;
    }
    return y;
  }

  Tensor backward(const Tensor& x, const Tensor& /*y*/, const Tensor& dy,
                  const double* p, double* g) const override {
    Tensor dx(x.shape);
    const std::size_t nw = static_cast<std::size_t>(s_.out) * s_.in;
    for (int o = 0; o < s_.out; ++o) {
      const double d = dy.v[o];
      const double* row = p + static_cast<std::size_t>(o) * s_.in;
      double* grow = g + static_cast<std::size_t>(o) * s_.in;
      for (int i = 0; i < s_.in; ++i) {
        grow[i] += d * x.v[i];
        dx.v[i] += row[i] * d;
      }
      g[nw + o] += d;
    }
    return dx;
  }

 private:
  LayerSpec s_;
};

class Relu final : public Layer {
 public:
  explicit Relu(const LayerSpec& s) : s_(s) {}
  LayerSpec spec() const override { return s_; }
  std::vector<int> out_shape(const std::vector<int>& in) const override { return in; }

  Tensor forward(const Tensor& x, const double*) const override {
    Tensor y = x;
    for (double& v : y.v) v = v > 0.0 ? v : 0.0;
    return y;
  }

  Tensor backward(const Tensor& x, const Tensor&, const Tensor& dy, const double*,
                  double*) const override {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i) {
      if (x.v[i] <= 0.0) dx.v[i] = 0.0;
    }
    return dx;
  }

 private:
  LayerSpec s_;
};

class Sigmoid final : public Layer {
 public:
  explicit Sigmoid(const LayerSpec& s) : s_(s) {}
  LayerSpec spec() const override { return s_; }
  std::vector<int> out_shape(const std::vector<int>& in) const override { return in; }

  Tensor forward(const Tensor& x, const double*) const override {
    Tensor y = x;
    for (double& v : y.v) v = 1.0 / (1.0 + std::exp(-v));
    return y;
  }

  Tensor backward(const Tensor&, const Tensor& y, const Tensor& dy, const double*,
                  double*) const override {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.v.size(); ++i) {
      dx.v[i] *= y.v[i] * (1.0 - y.v[i]);
    }
    return dx;
  }

 private:
  LayerSpec s_;
};

class Reshape final : public Layer {
 public:
  explicit Reshape(const LayerSpec& s) : s_(s) {
    require(!s.target.empty(), "reshape: empty target");
  }
  LayerSpec spec() const override { return s_; }

  std::vector<int> out_shape(const std::vector<int>& in) const override {
    require(Tensor::numel_of(in) == Tensor::numel_of(s_.target),
            "reshape: element count mismatch");
    return s_.target;
  }

  Tensor forward(const Tensor& x, const double*) const override {
    return Tensor(s_.target, x.v);
  }

  Tensor backward(const Tensor& x, const Tensor&, const Tensor& dy, const double*,
                  double*) const override {
    return Tensor(x.shape, dy.v);
  }

 private:
  LayerSpec s_;
};

}  // namespace

std::unique_ptr<Layer> make_layer(const LayerSpec& spec) {
  if (spec.kind == "conv") return std::make_unique<Conv2d>(spec);
  if (spec.kind == "deconv") return std::make_unique<ConvTranspose2d>(spec);
  if (spec.kind == "linear") return std::make_unique<Linear>(spec);
  if (spec.kind == "relu") return std::make_unique<Relu>(spec);
  if (spec.kind == "sigmoid") return std::make_unique<Sigmoid>(spec);
  if (spec.kind == "reshape") return std::make_unique<Reshape>(spec);
  throw ContractError("unknown layer kind: " + spec.kind);
}

void Sequential::add(const LayerSpec& spec) {
  require(!finalized_, "Sequential: add after finalize");
  specs_.push_back(spec);
}

void Sequential::finalize(const std::vector<int>& in_shape, std::size_t base_offset) {
  require(!finalized_, "Sequential: already finalized");
  in_shape_ = in_shape;
  base_offset_ = base_offset;
  std::vector<int> shape = in_shape;
  std::size_t offset = base_offset;
  for (const LayerSpec& spec : specs_) {
    layers_.push_back(make_layer(spec));
    offsets_.push_back(offset);
    shape = layers_.back()->out_shape(shape);
    offset += layers_.back()->param_count();
  }
  out_shape_ = shape;
  param_count_ = offset - base_offset;
  finalized_ = true;
}

void Sequential::init_params(double* params, Rng& rng) const {
  require(finalized_, "Sequential: not finalized");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->init_params(params + offsets_[i], rng);
  }
}

Tensor Sequential::forward(const Tensor& x, const double* params,
                           std::vector<Tensor>* trace) const {
  require(finalized_, "Sequential: not finalized");
  require(x.shape == in_shape_, "Sequential: input shape mismatch");
  Tensor cur = x;
  if (trace) {
    trace->clear();
    trace->reserve(layers_.size() + 1);
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (trace) trace->push_back(cur);
    cur = layers_[i]->forward(cur, params + offsets_[i]);
  }
  if (trace) trace->push_back(cur);
  return cur;
}

Tensor Sequential::backward(const Tensor& dy, const double* params,
                            const std::vector<Tensor>& trace, double* grads) const {
  require(finalized_, "Sequential: not finalized");
  require(trace.size() == layers_.size() + 1, "Sequential: bad trace");
  Tensor cur = dy;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    cur = layers_[i]->backward(trace[i], trace[i + 1], cur, params + offsets_[i],
                               grads + offsets_[i]);
  }
  return cur;
}

}  // namespace nlos::nn
