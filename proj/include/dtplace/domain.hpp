#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dtplace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double manhattan(const Point& p, const Point& q);

struct EdgeServer {
  Point position;
  double cost_per_cycle = 1.0;  // m_s
  double capacity = 1.0;        // T_s, cost units
};

struct DtComponent {
  double mean_cycles = 1.0;  // mean of the per-sample cycle demand
  double offload_kb = 1.0;
  std::vector<double> exchange_kb;  // one entry per sibling, self entry is 0
};

struct PhysicalDevice {
  Point position;
  std::vector<DtComponent> components;
};

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Immutable problem snapshot.
///
/// Components are addressed either as (device, component) or by a flat index
/// k in device-major order; flat lookups back every hot loop.
class Instance {
 public:
  Instance() = default;

  /// Builds an instance and derives both distance matrices from positions.
  static Instance with_computed_distances(std::vector<EdgeServer> servers,
                                          std::vector<PhysicalDevice> devices,
                                          double unit_transport_cost, std::uint64_t seed = 0);

  /// Builds an instance with caller-supplied matrices. No consistency check is
  /// made here; validate_instance reports stale or malformed matrices.
  Instance(std::vector<EdgeServer> servers, std::vector<PhysicalDevice> devices,
           double unit_transport_cost, Matrix server_device, Matrix server_server,
           std::uint64_t seed = 0);

  const std::vector<EdgeServer>& servers() const { return servers_; }
  const std::vector<PhysicalDevice>& devices() const { return devices_; }
  std::size_t num_servers() const { return servers_.size(); }
  std::size_t num_devices() const { return devices_.size(); }
  std::size_t num_components() const { return comp_device_.size(); }
  double unit_transport_cost() const { return unit_cost_; }
  std::uint64_t seed() const { return seed_; }

  /// e_s^d
  double server_device_distance(std::size_t s, std::size_t d) const { return dist_sd_(s, d); }
  /// l_ss'
  double server_server_distance(std::size_t s, std::size_t t) const { return dist_ss_(s, t); }
  const Matrix& dist_server_device() const { return dist_sd_; }
  const Matrix& dist_server_server() const { return dist_ss_; }

  std::size_t flat_index(std::size_t d, std::size_t c) const { return offset_[d] + c; }
  std::size_t device_offset(std::size_t d) const { return offset_[d]; }
  std::size_t device_of(std::size_t k) const { return comp_device_[k]; }
  std::size_t local_of(std::size_t k) const { return k - offset_[comp_device_[k]]; }
  const DtComponent& component(std::size_t k) const {
    return devices_[comp_device_[k]].components[local_of(k)];
  }
  /// g between two flat components of the same device.
  double exchange(std::size_t k, std::size_t k2) const {
    return component(k).exchange_kb[local_of(k2)];
  }

  bool operator==(const Instance& o) const;

 private:
  void index_components();

  std::vector<EdgeServer> servers_;
  std::vector<PhysicalDevice> devices_;
  double unit_cost_ = 0.0;
  Matrix dist_sd_;
  Matrix dist_ss_;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> comp_device_;
};

struct Range {
  double lo;
  double hi;
};

/// Instance generator parameters. Defaults are the reference experiment
/// distributions.
struct GenConfig {
  int num_servers = 6;
  int num_devices = 5;
  int components_lo = 1;
  int components_hi = 3;
  double area_side = 120.0;
  Range server_mean_cost{1.0, 10.0};  // mu_s; m_s ~ N(mu_s, rel_sd * mu_s)
  double server_cost_rel_sd = 0.2;
  Range capacity{0.3e9, 0.4e9};
  Range device_mean_cycles{1e6, 1e7};
  double cycles_rel_sd = 0.2;
  Range offload_kb{100.0, 500.0};
  Range exchange_kb{50.0, 250.0};
  Range unit_cost{0.0, 1.0};

  void validate() const;  // throws ConfigError
};

Instance generate_instance(const GenConfig& cfg, std::uint64_t seed);

/// Every violated invariant, in a stable order. Empty means ok.
std::vector<std::string> validate_instance(const Instance& inst);

}  // namespace dtplace
