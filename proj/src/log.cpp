#include "roughlab/log.hpp"

#include <iostream>
#include <mutex>

namespace roughlab {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s = [](std::string_view level, std::string_view message) {
    std::clog << "[" << level << "] " << message << '\n';
  };
  return s;
}

void emit(std::string_view level, std::string_view message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  if (sink()) sink()(level, message);
}

}  // namespace

LogSink set_log_sink(LogSink next) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  LogSink prev = std::move(sink());
  sink() = std::move(next);
  return prev;
}

void log_warning(std::string_view message) { emit("warning", message); }
void log_info(std::string_view message) { emit("info", message); }

}  // namespace roughlab
