// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors
//
// JSON over HTTP front for an Engine. Routes:
//
//   GET  /health
//   GET  /graph/summary
//   GET  /nodes?concept=
//   GET  /nodes/{id}/recommendations?mode=&k=&interleave=
//   POST /feedback
//   GET  /feedback?limit=
//   GET  /weights?mode=            PUT /weights?mode=
//   POST /train                    GET /train/{id}
//   GET  /export?anonymize=

#pragma once

#include <memory>
#include <string>

#include "kglf/engine.hpp"

namespace kglf {

class Service {
 public:
  explicit Service(Engine& engine);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds without serving yet. Port 0 picks a free one; returns the port.
  int bind(const std::string& host, int port);
  // Serves until stop(); blocks.
  void run();
  // bind() plus run() on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kglf
