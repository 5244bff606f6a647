#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlos/rng.hpp"
#include "nlos/tensor.hpp"

namespace nlos::nn {

// Serializable layer description; the architecture block of parameter files
// is a list of these.
struct LayerSpec {
  std::string kind;  // conv | deconv | linear | relu | sigmoid | reshape
  int in_ch = 0, out_ch = 0, k = 0, stride = 1, pad = 0;  // conv / deconv
  int in = 0, out = 0;                                    // linear
  std::vector<int> target;                                // reshape

  static LayerSpec conv(int in_ch, int out_ch, int k, int stride, int pad);
  static LayerSpec deconv(int in_ch, int out_ch, int k, int stride, int pad);
  static LayerSpec linear(int in, int out);
  static LayerSpec relu();
  static LayerSpec sigmoid();
  static LayerSpec reshape(std::vector<int> target);

  nlohmann::json to_json() const;
  static LayerSpec from_json(const nlohmann::json& j);
};

// Layers are stateless; parameters live in an external flat vector and
// activations in caller-owned traces, so forward/backward are reentrant and
// shareable across threads.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual LayerSpec spec() const = 0;
  virtual std::vector<int> out_shape(const std::vector<int>& in) const = 0;
  virtual std::size_t param_count() const { return 0; }
  virtual void init_params(double* /*p*/, Rng& /*rng*/) const {}
  virtual Tensor forward(const Tensor& x, const double* p) const = 0;
  // Returns dL/dx given dL/dy; accumulates parameter gradients into g.
  // x and y are the cached input/output from the forward pass.
  virtual Tensor backward(const Tensor& x, const Tensor& y, const Tensor& dy,
                          const double* p, double* g) const = 0;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec);

// Layer chain with offsets into a shared flat parameter vector.
class Sequential {
 public:
  void add(const LayerSpec& spec);
  // Validates shape flow and assigns parameter offsets starting at base.
  void finalize(const std::vector<int>& in_shape, std::size_t base_offset);

  std::size_t param_count() const { return param_count_; }
  std::size_t base_offset() const { return base_offset_; }
  const std::vector<int>& in_shape() const { return in_shape_; }
  const std::vector<int>& out_shape() const { return out_shape_; }
  const std::vector<LayerSpec>& specs() const { return specs_; }

  void init_params(double* params, Rng& rng) const;

  // trace, when given, receives inputs of every layer plus the final output
  // (size layers+1).
  Tensor forward(const Tensor& x, const double* params,
                 std::vector<Tensor>* trace = nullptr) const;
  Tensor backward(const Tensor& dy, const double* params,
                  const std::vector<Tensor>& trace, double* grads) const;

 private:
  std::vector<LayerSpec> specs_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<std::size_t> offsets_;
  std::vector<int> in_shape_, out_shape_;
  std::size_t base_offset_ = 0;
  std::size_t param_count_ = 0;
  bool finalized_ = false;
};

}  // namespace nlos::nn
