#include "inext/tensor_cache.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace inext {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'E', 'X', 'T', 'T', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <typename T>
  void put(const T& v) { bytes(&v, sizeof(T)); }
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  const std::vector<char>& buffer() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> buf) : buf_(std::move(buf)) {}
  template <typename T>
  T get() {
    T v;
    bytes(&v, sizeof(T));
    return v;
  }
  void bytes(void* p, std::size_t n) {
    if (pos_ + n > buf_.size()) throw std::runtime_error("tensor cache: truncated file");
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t position() const { return pos_; }
  const std::vector<char>& buffer() const { return buf_; }

 private:
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

}  // namespace

TensorCacheKey TensorCacheKey::from(const ModeBasis& basis, const QuadratureGrid& grid) {
  return {basis.size(), basis.length(), grid.resolution(), grid.rule(), grid.points_per_panel(),
          grid.hash()};
}

std::string TensorCacheKey::filename() const {
  std::ostringstream os;
  os << "tensors_N" << N << "_L" << std::setprecision(17) << length << "_" << to_string(rule) << resolution
     << "_" << std::hex << std::setw(16) << std::setfill('0') << grid_hash << ".bin";
  return os.str();
}

void save_tensor_cache(const std::filesystem::path& path, const TensorCacheKey& key,
                       const TensorSet& t) {
  if (t.N != key.N) throw std::invalid_argument("tensor cache: key and tensors disagree on N");
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.put(kVersion);
  w.put<std::int32_t>(key.N);
  w.put(key.length);
  w.put<std::int32_t>(key.resolution);
  w.put<std::int32_t>(static_cast<std::int32_t>(key.rule));
  w.put<std::int32_t>(key.points_per_panel);
  w.put(key.grid_hash);
  w.bytes(t.h2_diag.data(), sizeof(double) * t.N);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> conv = t.convection;
  w.bytes(conv.data(), sizeof(double) * conv.size());
  w.bytes(t.stiffness.data(), sizeof(double) * t.stiffness.size());
  w.bytes(t.inertia.data(), sizeof(double) * t.inertia.size());
  const std::uint64_t checksum = fnv1a(w.buffer().data(), w.buffer().size());
  w.put(checksum);

  // Write-then-rename so concurrent readers never see a partial file.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("tensor cache: cannot write " + tmp.string());
    out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) throw std::runtime_error("tensor cache: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<TensorSet> load_tensor_cache(const std::filesystem::path& path,
                                           const TensorCacheKey& key, double D) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(buf));

  char magic[8];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("tensor cache: bad magic in " + path.string());
  if (r.get<std::uint32_t>() != kVersion) return std::nullopt;
  TensorCacheKey stored;
  stored.N = r.get<std::int32_t>();
  stored.length = r.get<double>();
  stored.resolution = r.get<std::int32_t>();
  stored.rule = static_cast<QuadratureRule>(r.get<std::int32_t>());
  stored.points_per_panel = r.get<std::int32_t>();
  stored.grid_hash = r.get<std::uint64_t>();
  if (!(stored == key)) return std::nullopt;

  const int N = key.N;
  TensorSet t;
  t.N = N;
  t.h2_diag.resize(N);
  r.bytes(t.h2_diag.data(), sizeof(double) * N);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> conv(N, N);
  r.bytes(conv.data(), sizeof(double) * conv.size());
  t.convection = conv;
  t.stiffness = Tensor4<double>(N);
  r.bytes(t.stiffness.data(), sizeof(double) * t.stiffness.size());
  t.inertia = Tensor4<double>(N);
  r.bytes(t.inertia.data(), sizeof(double) * t.inertia.size());
  const std::size_t payload = r.position();
  const std::uint64_t expected = fnv1a(r.buffer().data(), payload);
  if (r.get<std::uint64_t>() != expected)
    throw std::runtime_error("tensor cache: checksum mismatch in " + path.string());
  t.stiffness_diag = D * t.h2_diag;
  return t;
}

TensorSet load_or_assemble(const ModeBasis& basis, const ModeSamples& samples, double D,
                           const std::filesystem::path& dir) {
  if (dir.empty()) return assemble_tensors(basis, samples, D);
  const auto key = TensorCacheKey::from(basis, samples.grid);
  const auto path = dir / key.filename();
  if (auto cached = load_tensor_cache(path, key, D)) return std::move(*cached);
  TensorSet t = assemble_tensors(basis, samples, D);
  std::filesystem::create_directories(dir);
  save_tensor_cache(path, key, t);
  return t;
}

}  // namespace inext
