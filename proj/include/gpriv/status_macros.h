// Copyright 2026 The gpriv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPRIV_STATUS_MACROS_H_
#define GPRIV_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define GPRIV_STATUS_CONCAT_INNER_(a, b) a##b
#define GPRIV_STATUS_CONCAT_(a, b) GPRIV_STATUS_CONCAT_INNER_(a, b)

#define GPRIV_RETURN_IF_ERROR(expr)                \
  do {                                             \
    const absl::Status gpriv_status_ = (expr);     \
    if (!gpriv_status_.ok()) return gpriv_status_; \
  } while (0)

#define GPRIV_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                 \
  if (!tmp.ok()) return tmp.status();                \
  lhs = std::move(*tmp)

#define GPRIV_ASSIGN_OR_RETURN(lhs, expr) \
  GPRIV_ASSIGN_OR_RETURN_IMPL_(           \
      GPRIV_STATUS_CONCAT_(gpriv_statusor_, __LINE__), lhs, expr)

#endif  // GPRIV_STATUS_MACROS_H_
