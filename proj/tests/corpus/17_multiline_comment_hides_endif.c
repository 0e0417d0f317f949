#ifdef CONFIG_A
/* a comment spanning
#endif
several lines */
int a;
#endif
