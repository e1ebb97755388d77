#include "hograph/params.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hograph/rng.hpp"

using nlohmann::json;

namespace hograph {

int block_input_width(const ModelParams& params, int k) {
  int base = 3 + params.descriptor_dim;
  if (k == 0) return base;
  if (k == 1 || k == 2) return params.hidden;
  if (k == 3) return base + 3 * params.hidden;
  throw std::invalid_argument("block index out of range");
}

namespace {

void glorot(Mat& m, long rows, long cols, Rng& rng, double gain = 1.0) {
  double a = gain * std::sqrt(6.0 / double(rows + cols));
  m.resize(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = rng.uniform(-a, a);
}

// Attention projections start small so early attention rows are peaked
// enough to clear the edge threshold without the softmax saturating; the
// displacement heads start near zero so the first refinements stay close to
// the identity. Block weights are shrunk to undo the gain of the
// unnormalized neighborhood sum (self weight 1 plus ~6 mesh neighbors per
// hop), which would otherwise amplify activations ~7x per block and make the
// initial displacements meters wide.
constexpr double kAttentionGain = 0.18;
constexpr double kHeadGain = 0.01;
constexpr double kBlockGain = 0.15;

}  // namespace

ModelParams init_params(int descriptor_dim, int hidden, int attention_dim,
                        uint64_t seed) {
  ModelParams p;
  p.descriptor_dim = descriptor_dim;
  p.hidden = hidden;
  p.attention_dim = attention_dim;
  Rng rng(seed);

  glorot(p.encoder_hand.weight, descriptor_dim, kDescriptorStatCount, rng);
  p.encoder_hand.bias = Mat::Zero(descriptor_dim, 1);
  glorot(p.encoder_obj.weight, descriptor_dim, kDescriptorStatCount, rng);
  p.encoder_obj.bias = Mat::Zero(descriptor_dim, 1);

  int feat = 3 + descriptor_dim;
  for (auto& att : p.attention) {
    glorot(att.w_query, feat, attention_dim, rng, kAttentionGain);
    glorot(att.w_key, feat, attention_dim, rng, kAttentionGain);
  }

  for (int k = 0; k < 4; ++k) {
    int in = block_input_width(p, k);
    glorot(p.blocks_hand[size_t(k)].weight, 2 * in, hidden, rng, kBlockGain);
    p.blocks_hand[size_t(k)].bias = Mat::Zero(1, hidden);
    glorot(p.blocks_obj[size_t(k)].weight, 2 * in, hidden, rng, kBlockGain);
    p.blocks_obj[size_t(k)].bias = Mat::Zero(1, hidden);
  }

  glorot(p.head_hand, hidden, 3, rng, kHeadGain);
  glorot(p.head_obj, hidden, 3, rng, kHeadGain);
  return p;
}

namespace {

template <typename Params, typename MatPtr>
std::vector<std::pair<std::string, MatPtr>> entries_impl(Params& p) {
  std::vector<std::pair<std::string, MatPtr>> out;
  out.emplace_back("encoder_hand.weight", &p.encoder_hand.weight);
  out.emplace_back("encoder_hand.bias", &p.encoder_hand.bias);
  out.emplace_back("encoder_obj.weight", &p.encoder_obj.weight);
  out.emplace_back("encoder_obj.bias", &p.encoder_obj.bias);
  const char* kinds[4] = {"hh", "oo", "ho", "oh"};
  for (int k = 0; k < 4; ++k) {
    out.emplace_back(std::string("attention.") + kinds[k] + ".w_query",
                     &p.attention[size_t(k)].w_query);
    out.emplace_back(std::string("attention.") + kinds[k] + ".w_key",
                     &p.attention[size_t(k)].w_key);
  }
  for (int k = 0; k < 4; ++k) {
    std::string b = "block" + std::to_string(k + 1);
    out.emplace_back(b + ".hand.weight", &p.blocks_hand[size_t(k)].weight);
    out.emplace_back(b + ".hand.bias", &p.blocks_hand[size_t(k)].bias);
    out.emplace_back(b + ".obj.weight", &p.blocks_obj[size_t(k)].weight);
    out.emplace_back(b + ".obj.bias", &p.blocks_obj[size_t(k)].bias);
  }
  out.emplace_back("head.hand", &p.head_hand);
  out.emplace_back("head.obj", &p.head_obj);
  return out;
}

}  // namespace

std::vector<std::pair<std::string, Mat*>> param_entries(ModelParams& params) {
  return entries_impl<ModelParams, Mat*>(params);
}

std::vector<std::pair<std::string, const Mat*>> param_entries(
    const ModelParams& params) {
  return entries_impl<const ModelParams, const Mat*>(params);
}

Vec flatten_params(const ModelParams& params) {
  auto entries = param_entries(params);
  long total = 0;
  for (const auto& [name, m] : entries) total += m->size();
  Vec theta(total);
  long at = 0;
  for (const auto& [name, m] : entries) {
    theta.segment(at, m->size()) =
        Eigen::Map<const Vec>(m->data(), m->size());
    at += m->size();
  }
  return theta;
}

void unflatten_params(const Vec& theta, ModelParams& params) {
  auto entries = param_entries(params);
  long at = 0;
  for (auto& [name, m] : entries) {
    if (at + m->size() > theta.size())
      throw std::invalid_argument("unflatten_params: vector too short");
    Eigen::Map<Vec>(m->data(), m->size()) = theta.segment(at, m->size());
    at += m->size();
  }
  if (at != theta.size())
    throw std::invalid_argument("unflatten_params: vector too long");
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
  json j;
  j["format"] = "hograph-checkpoint-v1";
  j["descriptor_dim"] = params.descriptor_dim;
  j["hidden"] = params.hidden;
  j["attention_dim"] = params.attention_dim;
  json tensors;
  for (const auto& [name, m] : param_entries(params)) {
    json data = json::array();
    for (long i = 0; i < m->rows(); ++i)
      for (long jj = 0; jj < m->cols(); ++jj) data.push_back((*m)(i, jj));
    tensors[name] = {{"rows", m->rows()}, {"cols", m->cols()},
                     {"data", std::move(data)}};
  }
  j["tensors"] = std::move(tensors);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j = json::parse(in);
  if (j.value("format", "") != "hograph-checkpoint-v1")
    throw std::runtime_error(path + ": not a checkpoint file");

  ModelParams params;
  params.descriptor_dim = j.at("descriptor_dim").get<int>();
  params.hidden = j.at("hidden").get<int>();
  params.attention_dim = j.at("attention_dim").get<int>();

  // Allocate the expected shapes, then overwrite from the file, checking
  // each tensor against them.
  ModelParams shaped = init_params(params.descriptor_dim, params.hidden,
                                   params.attention_dim, 0);
  params = shaped;

  const json& tensors = j.at("tensors");
  for (auto& [name, m] : param_entries(params)) {
    if (!tensors.contains(name))
      throw std::runtime_error(path + ": missing tensor '" + name + "'");
    const json& t = tensors.at(name);
    long rows = t.at("rows").get<long>(), cols = t.at("cols").get<long>();
    if (rows != m->rows() || cols != m->cols())
      throw std::runtime_error(
          path + ": tensor '" + name + "' has shape " + std::to_string(rows) +
          "x" + std::to_string(cols) + ", expected " +
          std::to_string(m->rows()) + "x" + std::to_string(m->cols()));
    const json& data = t.at("data");
    if (long(data.size()) != rows * cols)
      throw std::runtime_error(path + ": tensor '" + name +
                               "' data length mismatch");
    long at = 0;
    for (long i = 0; i < rows; ++i)
      for (long jj = 0; jj < cols; ++jj)
        (*m)(i, jj) = data[size_t(at++)].get<double>();
  }
  return params;
}

}  // namespace hograph
