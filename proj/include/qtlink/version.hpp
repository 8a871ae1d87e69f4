#pragma once

#define QTLINK_VERSION "0.1.0"
