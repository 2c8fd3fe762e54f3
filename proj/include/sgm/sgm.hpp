#pragma once

#include "sgm/abelian.hpp"
#include "sgm/catalog.hpp"
#include "sgm/expression.hpp"
#include "sgm/family.hpp"
#include "sgm/model.hpp"
#include "sgm/model_file.hpp"
#include "sgm/obstruction.hpp"
#include "sgm/reduction.hpp"
