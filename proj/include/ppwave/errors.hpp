#pragma once

#include <stdexcept>
#include <string>

namespace ppwave {

struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct subcritical_error : std::runtime_error {
  explicit subcritical_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct insufficient_data_error : std::runtime_error {
  explicit insufficient_data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ppwave
