#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cutmem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Error categories; mirrored one-to-one by the public C status codes.
enum class Status {
  Ok = 0,
  InvalidArgument,
  Geometry,
  SurfaceMiss,
  Solver,
  Io,
  Internal
};

class Error : public std::runtime_error {
public:
  Error(Status code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Status code() const noexcept { return code_; }

private:
  Status code_;
};

[[noreturn]] inline void fail(Status code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Status code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

} // namespace cutmem
