#ifndef UTIL_H
#define UTIL_H

#ifdef CONFIG_DEBUG
#define LOG(x) log_impl(x)
#else
#define LOG(x)
#endif

int boot(void);

#endif
