#include "floquet_sb/log.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace floquet_sb::log {
namespace {

std::mutex& guard() {
  static std::mutex m;
  return m;
}

Sink& current_sink() {
  static Sink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return sink;
}

std::set<std::string>& seen() {
  static std::set<std::string> s;
  return s;
}

}  // namespace

void warn(const std::string& message) {
  std::lock_guard lock(guard());
  if (!seen().insert(message).second) return;
  if (current_sink()) current_sink()(message);
}

Sink set_sink(Sink sink) {
  std::lock_guard lock(guard());
  Sink previous = std::move(current_sink());
  current_sink() = std::move(sink);
  return previous;
}

void reset_seen() {
  std::lock_guard lock(guard());
  seen().clear();
}

}  // namespace floquet_sb::log
