// Copyright 2026 The osbmdi Authors
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

#pragma once

#include "osbmdi/adversary/attack_spec.hpp"
#include "osbmdi/adversary/attacks.hpp"
#include "osbmdi/analysis/batch.hpp"
#include "osbmdi/analysis/detection.hpp"
#include "osbmdi/analysis/entangle.hpp"
#include "osbmdi/analysis/information.hpp"
#include "osbmdi/analysis/leakage.hpp"
#include "osbmdi/analysis/noise.hpp"
#include "osbmdi/analysis/table2.hpp"
#include "osbmdi/errors.hpp"
#include "osbmdi/protocol/channel.hpp"
#include "osbmdi/protocol/codec.hpp"
#include "osbmdi/protocol/config.hpp"
#include "osbmdi/protocol/sequence.hpp"
#include "osbmdi/protocol/session.hpp"
#include "osbmdi/protocol/transcript.hpp"
#include "osbmdi/protocol/types.hpp"
#include "osbmdi/quantum/bell.hpp"
#include "osbmdi/quantum/frames.hpp"
#include "osbmdi/quantum/state_vector.hpp"
#include "osbmdi/quantum/world.hpp"
#include "osbmdi/rng.hpp"
