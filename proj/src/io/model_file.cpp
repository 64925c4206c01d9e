#include "dtwin/io/model_file.hpp"

#include "dtwin/error.hpp"
#include "dtwin/io/binary.hpp"
#include "dtwin/io/files.hpp"

namespace dtwin::io {

namespace {

constexpr std::string_view kMagic = "DTWINMDL";

void put_matrix(ByteWriter& w, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  w.u64(static_cast<std::uint64_t>(m.rows()));
  w.u64(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
}

Eigen::MatrixXd get_matrix(ByteReader& r) {
  const auto rows = r.u64();
  const auto cols = r.u64();
  if (rows > (1ULL << 32) || cols > (1ULL << 32))
    fail(ErrorKind::io, "model file: implausible matrix size");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
  return m;
}

void put_vector(ByteWriter& w, const Eigen::VectorXd& v) {
  w.u64(static_cast<std::uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) w.f64(v[i]);
}

Eigen::VectorXd get_vector(ByteReader& r) {
  const auto n = r.u64();
  if (n > (1ULL << 32)) fail(ErrorKind::io, "model file: implausible vector size");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = r.f64();
  return v;
}

void put_sparse(ByteWriter& w, const reservoir::SparseMatrix& s) {
  reservoir::SparseMatrix c = s;
  c.makeCompressed();
  w.u64(static_cast<std::uint64_t>(c.rows()));
  w.u64(static_cast<std::uint64_t>(c.cols()));
  w.u64(static_cast<std::uint64_t>(c.nonZeros()));
  for (Eigen::Index i = 0; i <= c.outerSize(); ++i)
    w.u64(static_cast<std::uint64_t>(c.outerIndexPtr()[i]));
  for (Eigen::Index k = 0; k < c.nonZeros(); ++k)
    w.u64(static_cast<std::uint64_t>(c.innerIndexPtr()[k]));
  for (Eigen::Index k = 0; k < c.nonZeros(); ++k) w.f64(c.valuePtr()[k]);
}

reservoir::SparseMatrix get_sparse(ByteReader& r) {
  const auto rows = static_cast<Eigen::Index>(r.u64());
  const auto cols = static_cast<Eigen::Index>(r.u64());
  const auto nnz = static_cast<Eigen::Index>(r.u64());
  if (rows < 0 || cols < 0 || nnz < 0 || rows > (1 << 30) || cols > (1 << 30))
    fail(ErrorKind::io, "model file: implausible sparse matrix");
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::vector<Eigen::Index> outer(static_cast<std::size_t>(rows) + 1);
  for (auto& o : outer) o = static_cast<Eigen::Index>(r.u64());
  std::vector<Eigen::Index> inner(static_cast<std::size_t>(nnz));
  for (auto& i : inner) i = static_cast<Eigen::Index>(r.u64());
  if (outer.front() != 0 || outer.back() != nnz)
    fail(ErrorKind::io, "model file: corrupt sparse index");
  for (Eigen::Index row = 0; row < rows; ++row) {
    const auto b = outer[static_cast<std::size_t>(row)];
    const auto e = outer[static_cast<std::size_t>(row) + 1];
    if (b > e || e > nnz) fail(ErrorKind::io, "model file: corrupt sparse index");
    for (auto k = b; k < e; ++k) {
      const auto col = inner[static_cast<std::size_t>(k)];
      if (col < 0 || col >= cols) fail(ErrorKind::io, "model file: bad column");
      entries.emplace_back(row, col, 0.0);
    }
  }
  for (auto& t : entries) t = Eigen::Triplet<double>(t.row(), t.col(), r.f64());
  reservoir::SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  if (m.nonZeros() != nnz) fail(ErrorKind::io, "model file: duplicate sparse entries");
  return m;
}

void put_config(ByteWriter& w, const reservoir::ReservoirConfig& c) {
  w.u64(c.size);
  w.u64(c.input_dim);
  w.u64(c.output_dim);
  w.f64(c.spectral_radius);
  w.f64(c.density);
  w.f64(c.input_scaling);
  w.f64(c.param_scaling);
  w.f64(c.bias_scaling);
  w.f64(c.leak_rate);
  w.f64(c.ridge);
  w.f64(c.input_noise);
  w.u64(c.warmup);
  w.u64(c.seed);
}

reservoir::ReservoirConfig get_config(ByteReader& r) {
  reservoir::ReservoirConfig c;
  c.size = r.u64();
  c.input_dim = r.u64();
  c.output_dim = r.u64();
  c.spectral_radius = r.f64();
  c.density = r.f64();
  c.input_scaling = r.f64();
  c.param_scaling = r.f64();
  c.bias_scaling = r.f64();
  c.leak_rate = r.f64();
  c.ridge = r.f64();
  c.input_noise = r.f64();
  c.warmup = r.u64();
  c.seed = r.u64();
  return c;
}

}  // namespace

std::string encode_model(const twin::TrainedTwin& t) {
  ByteWriter w;
  w.raw(kMagic);
  w.u32(kModelVersion);
  put_config(w, t.config);
  put_matrix(w, t.matrices.input);
  put_vector(w, t.matrices.param);
  put_sparse(w, t.matrices.recurrent);
  put_vector(w, t.matrices.bias);
  put_matrix(w, t.readout.weights);
  put_vector(w, t.norm.mean);
  put_vector(w, t.norm.scale);
  w.f64(t.norm.param_center);
  w.f64(t.norm.param_scale);
  w.u64(t.train_params.size());
  for (double p : t.train_params) w.f64(p);
  w.f64(t.residual);

  w.str(t.system_name);
  w.u64(t.system_params.size());
  for (const auto& [k, v] : t.system_params) {
    w.str(k);
    w.f64(v);
  }
  w.u64(t.variable_names.size());
  for (const auto& n : t.variable_names) w.str(n);
  w.u8(static_cast<std::uint8_t>(t.collapse.mode));
  w.u64(t.collapse.variable);
  w.f64(t.collapse.threshold);
  w.f64(t.collapse.final_fraction);
  w.u8(t.collapse.absorbing ? 1 : 0);
  w.u8(t.collapse.blow_up_collapses ? 1 : 0);
  w.f64(t.collapse.blow_up_norm);
  w.f64(t.sample_dt);
  w.f64(t.present_param);
  w.f64(t.warm.param);
  w.f64(t.warm.t0);
  w.f64(t.warm.dt);
  put_matrix(w, t.warm.samples);
  return w.bytes();
}

twin::TrainedTwin decode_model(const std::string& bytes) {
  ByteReader r(bytes);
  if (r.raw(kMagic.size()) != kMagic) fail(ErrorKind::io, "not a model file");
  const auto version = r.u32();
  if (version != kModelVersion)
    fail(ErrorKind::io, "unsupported model version " + std::to_string(version));
  twin::TrainedTwin t;
  t.config = get_config(r);
  t.matrices.input = get_matrix(r);
  t.matrices.param = get_vector(r);
  t.matrices.recurrent = get_sparse(r);
  t.matrices.bias = get_vector(r);
  t.readout.weights = get_matrix(r);
  t.norm.mean = get_vector(r);
  t.norm.scale = get_vector(r);
  t.norm.param_center = r.f64();
  t.norm.param_scale = r.f64();
  t.train_params.resize(r.u64());
  for (double& p : t.train_params) p = r.f64();
  t.residual = r.f64();

  t.system_name = r.str();
  const auto n_params = r.u64();
  for (std::uint64_t i = 0; i < n_params; ++i) {
    std::string key = r.str();
    t.system_params[key] = r.f64();
  }
  t.variable_names.resize(r.u64());
  for (auto& n : t.variable_names) n = r.str();
  const auto mode = r.u8();
  if (mode > 1) fail(ErrorKind::io, "model file: unknown collapse mode");
  t.collapse.mode = static_cast<dynsys::CollapseCriterion::Mode>(mode);
  t.collapse.variable = r.u64();
  t.collapse.threshold = r.f64();
  t.collapse.final_fraction = r.f64();
  const auto absorbing = r.u8();
  if (absorbing > 1) fail(ErrorKind::io, "model file: bad absorbing flag");
  t.collapse.absorbing = absorbing == 1;
  const auto escape = r.u8();
  if (escape > 1) fail(ErrorKind::io, "model file: bad blow-up flag");
  t.collapse.blow_up_collapses = escape == 1;
  t.collapse.blow_up_norm = r.f64();
  t.sample_dt = r.f64();
  t.present_param = r.f64();
  t.warm.param = r.f64();
  t.warm.t0 = r.f64();
  t.warm.dt = r.f64();
  t.warm.samples = get_matrix(r);
  if (!r.done()) fail(ErrorKind::io, "model file: trailing bytes");

  const auto n = static_cast<Eigen::Index>(t.config.size);
  const auto m = static_cast<Eigen::Index>(t.config.input_dim);
  if (t.matrices.input.rows() != n || t.matrices.input.cols() != m ||
      t.matrices.param.size() != n || t.matrices.bias.size() != n ||
      t.matrices.recurrent.rows() != n || t.readout.weights.cols() != n ||
      t.readout.weights.rows() != static_cast<Eigen::Index>(t.config.output_dim) ||
      t.norm.mean.size() != m || t.norm.scale.size() != m)
    fail(ErrorKind::io, "model file: inconsistent dimensions");
  return t;
}

void save_model(const std::filesystem::path& path, const twin::TrainedTwin& twin) {
  write_file_atomic(path, encode_model(twin));
}

twin::TrainedTwin load_model(const std::filesystem::path& path) {
  return decode_model(read_file(path));
}

}  // namespace dtwin::io
